"""Independent reference implementations used only by the tests."""
import heapq
import itertools


def all_strings(alphabet, max_len):
    out = []
    for n in range(max_len + 1):
        out.extend("".join(p) for p in itertools.product(alphabet, repeat=n))
    return out


def _neighbours(s, alphabet, max_len, w_ins, w_del, w_rep):
    for i in range(len(s)):
        yield s[:i] + s[i + 1:], w_del
        for c in alphabet:
            if c != s[i]:
                yield s[:i] + c + s[i + 1:], w_rep
    if len(s) < max_len:
        for i in range(len(s) + 1):
            for c in alphabet:
                yield s[:i] + c + s[i:], w_ins


def edit_search(source, alphabet, max_len, w_ins=1, w_del=1, w_rep=2, radius=None):
    """Dijkstra over sequences of single edits, intermediate strings bounded by ``max_len``.

    Returns the minimal cost of reaching every string (within ``radius``).
    """
    best = {source: 0}
    heap = [(0, source)]
    while heap:
        cost, s = heapq.heappop(heap)
        if cost > best[s]:
            continue
        for t, w in _neighbours(s, alphabet, max_len, w_ins, w_del, w_rep):
            c = cost + w
            if radius is not None and c > radius:
                continue
            if c < best.get(t, float("inf")):
                best[t] = c
                heapq.heappush(heap, (c, t))
    return best


def lcs_length(a, b):
    """Longest common subsequence by memoized recursion."""
    import functools

    @functools.lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


def jaro_reference(s1, s2):
    """Textbook Jaro: greedy in-window matching, then half the out-of-order matches."""
    if not s1 and not s2:
        return 1.0
    if not s1 or not s2:
        return 0.0
    window = max(0, max(len(s1), len(s2)) // 2 - 1)
    taken = [False] * len(s2)
    m1 = []
    for i, c in enumerate(s1):
        for j in range(max(0, i - window), min(len(s2), i + window + 1)):
            if not taken[j] and s2[j] == c:
                taken[j] = True
                m1.append(c)
                break
    m2 = [s2[j] for j in range(len(s2)) if taken[j]]
    m = len(m1)
    if m == 0:
        return 0.0
    t = sum(a != b for a, b in zip(m1, m2)) / 2
    return (m / len(s1) + m / len(s2) + (m - t) / m) / 3


def ngram_sim_reference(s1, s2, n):
    g1 = {s1[i:i + n] for i in range(len(s1) - n + 1)}
    g2 = {s2[i:i + n] for i in range(len(s2) - n + 1)}
    if not g1 and not g2:
        return float(s1 == s2)
    return len(g1 & g2) / len(g1 | g2)


def average_precision_reference(y, scores):
    """AP as the mean of precision@k over the ranks of the positives."""
    order = sorted(range(len(y)), key=lambda i: -scores[i])
    hits = 0
    total = 0.0
    for k, i in enumerate(order, start=1):
        if y[i]:
            hits += 1
            total += hits / k
    return total / sum(1 for v in y if v)
