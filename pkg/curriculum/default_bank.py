"""
Built-in problem bank: 20 data-structure and algorithm topics, three items each.

Hint templates and suggestion tables are assembled from per-topic phrases so
every (level, tier) pair exists for every item.
"""

from curriculum.bank import (
    HINT_LEVELS,
    HINT_TIERS,
    SUGGESTION_CATEGORIES,
    Difficulty,
    ItemTest,
    ProblemItem,
    shares_solution_span,
    template_key,
)

EXPECTED_TIMES = {Difficulty.EASY: 300.0, Difficulty.MEDIUM: 600.0, Difficulty.HARD: 900.0}

# topic -> (prerequisites, concept, strategy, component, region, analogy, error tags)
TOPICS = {
    "arrays": (
        (),
        "contiguous indexing",
        "walk the sequence once while keeping a running answer",
        "a guard for an empty sequence",
        "where the running answer is updated",
        "reading house numbers along one street",
        ("off-by-one", "boundary-condition"),
    ),
    "strings": (
        (),
        "character-by-character scanning",
        "compare characters from both ends or build the result piece by piece",
        "handling of upper and lower case",
        "the comparison between two characters",
        "reading a word letter by letter",
        ("off-by-one", "type-confusion"),
    ),
    "hash_maps": (
        (),
        "constant-time lookup by key",
        "remember what you have already seen in a dictionary",
        "the lookup that happens before the insert",
        "the point where a key is first stored",
        "a coat check that hands out tickets",
        ("wrong-data-structure", "null-handling"),
    ),
    "math": (
        (),
        "number properties such as divisibility",
        "reduce the problem with a known identity instead of brute force",
        "a special case for zero and one",
        "the loop bound on candidate divisors",
        "splitting sweets evenly between friends",
        ("integer-overflow", "boundary-condition"),
    ),
    "stacks": (
        (),
        "last-in first-out order",
        "push pending work and pop it when its match arrives",
        "a check that the stack is empty at the end",
        "the branch that pops an element",
        "a pile of plates in a cafeteria",
        ("wrong-data-structure", "null-handling"),
    ),
    "queues": (
        (),
        "first-in first-out order",
        "process items in arrival order and enqueue follow-up work",
        "a limit on how many items stay in the window",
        "the point where old items leave",
        "people waiting in line at a ticket office",
        ("wrong-data-structure", "off-by-one"),
    ),
    "recursion": (
        (),
        "a problem defined in terms of smaller copies of itself",
        "solve the smallest case directly and combine answers of smaller inputs",
        "a base case that stops the descent",
        "the condition that decides whether to recurse again",
        "climbing down a ladder one rung at a time",
        ("missing-base-case", "incorrect-recurrence"),
    ),
    "two_pointers": (
        ("arrays",),
        "two indices moving toward each other",
        "start one index at each end and move the one that cannot improve the answer",
        "the stopping rule when the indices meet",
        "the decision about which index moves",
        "two people walking toward each other along a corridor",
        ("off-by-one", "infinite-loop"),
    ),
    "sliding_window": (
        ("arrays", "hash_maps"),
        "a window that grows on the right and shrinks on the left",
        "extend the window until it breaks the rule, then shrink it from the left",
        "bookkeeping for what the window currently contains",
        "the shrinking step on the left edge",
        "a picture frame sliding along a long painting",
        ("off-by-one", "boundary-condition"),
    ),
    "linked_lists": (
        ("arrays",),
        "nodes connected by next references",
        "rewire one link at a time while remembering the node you came from",
        "a dummy head node to simplify edge cases",
        "the moment a next reference is overwritten",
        "a treasure hunt where every clue names the next spot",
        ("null-handling", "mutation-side-effect"),
    ),
    "sorting": (
        ("arrays",),
        "ordering elements to expose structure",
        "sort first, then a single pass can see neighbours together",
        "a stable tie-break between equal keys",
        "the comparison used by the sort key",
        "lining up students by height",
        ("wrong-complexity", "boundary-condition"),
    ),
    "binary_search": (
        ("arrays",),
        "halving a sorted search space",
        "keep an invariant on the low and high bounds and halve the range each step",
        "the exact update of the bounds after each comparison",
        "the midpoint comparison",
        "guessing a number with higher or lower answers",
        ("off-by-one", "infinite-loop"),
    ),
    "trees": (
        ("recursion",),
        "hierarchical nodes with children",
        "let each subtree report a summary and combine the summaries at the parent",
        "a case for an absent child",
        "the combination of the two child summaries",
        "a family tree where each parent asks the children",
        ("missing-base-case", "wrong-traversal-order"),
    ),
    "string_parsing": (
        ("strings", "stacks"),
        "tokens and nesting in text",
        "scan once and keep the nesting context on a stack",
        "handling of an unmatched closing symbol",
        "the branch for a closing symbol",
        "matching opening and closing doors in a hallway",
        ("boundary-condition", "wrong-data-structure"),
    ),
    "bit_manipulation": (
        ("math",),
        "binary representation of integers",
        "inspect or clear one bit at a time using masks",
        "care with negative numbers",
        "the mask that isolates the lowest set bit",
        "switching a row of light switches",
        ("integer-overflow", "type-confusion"),
    ),
    "heaps": (
        ("trees",),
        "a priority structure with cheap access to the smallest element",
        "keep only the k best candidates in a bounded priority queue",
        "a size limit on the priority queue",
        "the point where the weakest candidate is evicted",
        "an emergency room that always treats the most urgent patient",
        ("wrong-data-structure", "wrong-complexity"),
    ),
    "graphs": (
        ("queues", "hash_maps"),
        "vertices joined by edges",
        "explore breadth first from the source and record each vertex once",
        "a visited set that prevents revisiting",
        "the place where neighbours are enqueued",
        "spreading news through a group of friends",
        ("infinite-loop", "wrong-traversal-order"),
    ),
    "backtracking": (
        ("recursion",),
        "building candidates incrementally and undoing choices",
        "choose, explore, then undo the choice before trying the next one",
        "the undo step after exploring a choice",
        "the check that prunes an invalid partial candidate",
        "trying keys on a ring one after another",
        ("missing-base-case", "mutation-side-effect"),
    ),
    "dynamic_programming": (
        ("recursion", "arrays"),
        "overlapping subproblems with optimal substructure",
        "define what one table cell means and fill cells in dependency order",
        "initial values for the first cells of the table",
        "the transition that reads earlier cells",
        "filling a staircase chart step by step",
        ("incorrect-recurrence", "off-by-one"),
    ),
    "greedy": (
        ("sorting",),
        "locally optimal choices that stay globally safe",
        "sort by the quantity that makes the next choice safe and commit to it",
        "an argument for why the first choice is never wrong",
        "the comparison that accepts or rejects a candidate",
        "packing the fewest coins into a purse",
        ("wrong-complexity", "boundary-condition"),
    ),
}

# topic -> [(name, difficulty, reference solution, [(input, expected), ...])]
ITEMS = {
    "arrays": [
        ("max_element", Difficulty.EASY,
         "def max_element(xs):\n    best = xs[0]\n    for x in xs[1:]:\n        best = x if x > best else best\n    return best",
         [("[3, 9, 2]", "9"), ("[-4]", "-4")]),
        ("prefix_sums", Difficulty.MEDIUM,
         "def prefix_sums(xs):\n    out, acc = [], 0\n    for x in xs:\n        acc += x\n        out.append(acc)\n    return out",
         [("[1, 2, 3]", "[1, 3, 6]"), ("[]", "[]")]),
        ("rotate_right", Difficulty.HARD,
         "def rotate_right(xs, k):\n    if not xs:\n        return xs\n    k %= len(xs)\n    return xs[-k:] + xs[:-k] if k else xs[:]",
         [("[1, 2, 3, 4], 1", "[4, 1, 2, 3]"), ("[1, 2], 5", "[2, 1]"), ("[], 3", "[]")]),
    ],
    "strings": [
        ("is_palindrome", Difficulty.EASY,
         "def is_palindrome(s):\n    t = s.lower()\n    return t == t[::-1]",
         [("'Level'", "True"), ("'abc'", "False")]),
        ("count_vowels", Difficulty.MEDIUM,
         "def count_vowels(s):\n    return sum(ch in 'aeiou' for ch in s.lower())",
         [("'Queue'", "4"), ("'xyz'", "0")]),
        ("longest_common_prefix", Difficulty.HARD,
         "def longest_common_prefix(words):\n    if not words:\n        return ''\n    lo, hi = min(words), max(words)\n    i = 0\n    while i < len(lo) and lo[i] == hi[i]:\n        i += 1\n    return lo[:i]",
         [("['flow', 'flight']", "'fl'"), ("['a', 'b']", "''"), ("[]", "''")]),
    ],
    "hash_maps": [
        ("first_duplicate", Difficulty.EASY,
         "def first_duplicate(xs):\n    seen = set()\n    for x in xs:\n        if x in seen:\n            return x\n        seen.add(x)\n    return None",
         [("[2, 1, 2]", "2"), ("[1, 2]", "None")]),
        ("two_sum", Difficulty.MEDIUM,
         "def two_sum(xs, target):\n    where = {}\n    for i, x in enumerate(xs):\n        if target - x in where:\n            return where[target - x], i\n        where[x] = i",
         [("[2, 7, 11], 9", "(0, 1)"), ("[3, 3], 6", "(0, 1)")]),
        ("group_anagrams", Difficulty.HARD,
         "def group_anagrams(words):\n    groups = {}\n    for w in words:\n        groups.setdefault(''.join(sorted(w)), []).append(w)\n    return list(groups.values())",
         [("['eat', 'tea', 'tan']", "[['eat', 'tea'], ['tan']]"), ("[]", "[]"), ("['a']", "[['a']]")]),
    ],
    "math": [
        ("is_even_sum", Difficulty.EASY,
         "def is_even_sum(a, b):\n    return (a + b) % 2 == 0",
         [("2, 4", "True"), ("1, 2", "False")]),
        ("gcd", Difficulty.MEDIUM,
         "def gcd(a, b):\n    while b:\n        a, b = b, a % b\n    return abs(a)",
         [("12, 18", "6"), ("7, 0", "7")]),
        ("is_prime", Difficulty.HARD,
         "def is_prime(n):\n    if n < 2:\n        return False\n    d = 2\n    while d * d <= n:\n        if n % d == 0:\n            return False\n        d += 1\n    return True",
         [("97", "True"), ("1", "False"), ("49", "False")]),
    ],
    "stacks": [
        ("reverse_with_stack", Difficulty.EASY,
         "def reverse_with_stack(xs):\n    st = list(xs)\n    out = []\n    while st:\n        out.append(st.pop())\n    return out",
         [("[1, 2, 3]", "[3, 2, 1]"), ("[]", "[]")]),
        ("balanced_brackets", Difficulty.MEDIUM,
         "def balanced_brackets(s):\n    pairs = {')': '(', ']': '[', '}': '{'}\n    st = []\n    for ch in s:\n        if ch in pairs:\n            if not st or st.pop() != pairs[ch]:\n                return False\n        elif ch in '([{':\n            st.append(ch)\n    return not st",
         [("'([])'", "True"), ("'(]'", "False")]),
        ("next_greater", Difficulty.HARD,
         "def next_greater(xs):\n    res = [-1] * len(xs)\n    st = []\n    for i, x in enumerate(xs):\n        while st and xs[st[-1]] < x:\n            res[st.pop()] = x\n        st.append(i)\n    return res",
         [("[2, 1, 3]", "[3, 3, -1]"), ("[]", "[]"), ("[5, 4]", "[-1, -1]")]),
    ],
    "queues": [
        ("hot_potato", Difficulty.EASY,
         "from collections import deque\ndef hot_potato(names, k):\n    q = deque(names)\n    while len(q) > 1:\n        q.rotate(-k)\n        q.pop()\n    return q[0]",
         [("['a', 'b', 'c'], 1", "'c'"), ("['a'], 3", "'a'")]),
        ("moving_average", Difficulty.MEDIUM,
         "from collections import deque\ndef moving_average(xs, w):\n    q, total, out = deque(), 0, []\n    for x in xs:\n        q.append(x)\n        total += x\n        if len(q) > w:\n            total -= q.popleft()\n        out.append(total / len(q))\n    return out",
         [("[2, 4, 6], 2", "[2.0, 3.0, 5.0]"), ("[], 3", "[]")]),
        ("recent_calls", Difficulty.HARD,
         "from collections import deque\ndef recent_calls(times, span):\n    q, out = deque(), []\n    for t in times:\n        q.append(t)\n        while q[0] < t - span:\n            q.popleft()\n        out.append(len(q))\n    return out",
         [("[1, 100, 3001], 3000", "[1, 2, 3]"), ("[], 10", "[]"), ("[1, 3002], 3000", "[1, 1]")]),
    ],
    "recursion": [
        ("factorial", Difficulty.EASY,
         "def factorial(n):\n    return 1 if n <= 1 else n * factorial(n - 1)",
         [("5", "120"), ("0", "1")]),
        ("power_set_size", Difficulty.MEDIUM,
         "def power_set_size(n):\n    if n == 0:\n        return 1\n    return 2 * power_set_size(n - 1)",
         [("3", "8"), ("0", "1")]),
        ("flatten_nested", Difficulty.HARD,
         "def flatten_nested(xs):\n    out = []\n    for x in xs:\n        out.extend(flatten_nested(x) if isinstance(x, list) else [x])\n    return out",
         [("[1, [2, [3]]]", "[1, 2, 3]"), ("[]", "[]"), ("[[[]]]", "[]")]),
    ],
    "two_pointers": [
        ("pair_with_sum", Difficulty.EASY,
         "def pair_with_sum(xs, target):\n    i, j = 0, len(xs) - 1\n    while i < j:\n        s = xs[i] + xs[j]\n        if s == target:\n            return i, j\n        i, j = (i + 1, j) if s < target else (i, j - 1)\n    return None",
         [("[1, 2, 4, 7], 6", "(1, 2)"), ("[1, 2], 9", "None")]),
        ("remove_duplicates_sorted", Difficulty.MEDIUM,
         "def remove_duplicates_sorted(xs):\n    k = 0\n    for x in xs:\n        if k == 0 or xs[k - 1] != x:\n            xs[k] = x\n            k += 1\n    return k",
         [("[1, 1, 2]", "2"), ("[]", "0")]),
        ("container_most_water", Difficulty.HARD,
         "def container_most_water(h):\n    i, j, best = 0, len(h) - 1, 0\n    while i < j:\n        best = max(best, (j - i) * min(h[i], h[j]))\n        if h[i] < h[j]:\n            i += 1\n        else:\n            j -= 1\n    return best",
         [("[1, 8, 6, 2, 5, 4, 8, 3, 7]", "49"), ("[1, 1]", "1"), ("[]", "0")]),
    ],
    "sliding_window": [
        ("max_window_sum", Difficulty.EASY,
         "def max_window_sum(xs, k):\n    cur = sum(xs[:k])\n    best = cur\n    for i in range(k, len(xs)):\n        cur += xs[i] - xs[i - k]\n        best = max(best, cur)\n    return best",
         [("[1, 4, 2, 9], 2", "11"), ("[5], 1", "5")]),
        ("longest_unique_run", Difficulty.MEDIUM,
         "def longest_unique_run(s):\n    last, lo, best = {}, 0, 0\n    for i, ch in enumerate(s):\n        if last.get(ch, -1) >= lo:\n            lo = last[ch] + 1\n        last[ch] = i\n        best = max(best, i - lo + 1)\n    return best",
         [("'abcabcbb'", "3"), ("''", "0")]),
        ("min_cover_window", Difficulty.HARD,
         "from collections import Counter\ndef min_cover_window(s, t):\n    need, missing = Counter(t), len(t)\n    lo = start = end = 0\n    for hi, ch in enumerate(s, 1):\n        missing -= need[ch] > 0\n        need[ch] -= 1\n        if not missing:\n            while need[s[lo]] < 0:\n                need[s[lo]] += 1\n                lo += 1\n            if not end or hi - lo < end - start:\n                start, end = lo, hi\n            need[s[lo]] += 1\n            missing += 1\n            lo += 1\n    return s[start:end]",
         [("'ADOBECODEBANC', 'ABC'", "'BANC'"), ("'a', 'aa'", "''"), ("'', 'a'", "''")]),
    ],
    "linked_lists": [
        ("list_length", Difficulty.EASY,
         "def list_length(node):\n    n = 0\n    while node:\n        n += 1\n        node = node.next\n    return n",
         [("1->2->3", "3"), ("None", "0")]),
        ("reverse_list", Difficulty.MEDIUM,
         "def reverse_list(node):\n    prev = None\n    while node:\n        node.next, prev, node = prev, node, node.next\n    return prev",
         [("1->2->3", "3->2->1"), ("None", "None")]),
        ("merge_sorted_lists", Difficulty.HARD,
         "def merge_sorted_lists(a, b):\n    head = tail = Node(0)\n    while a and b:\n        if a.val <= b.val:\n            tail.next, a = a, a.next\n        else:\n            tail.next, b = b, b.next\n        tail = tail.next\n    tail.next = a or b\n    return head.next",
         [("1->3, 2->4", "1->2->3->4"), ("None, 1", "1"), ("None, None", "None")]),
    ],
    "sorting": [
        ("sort_by_length", Difficulty.EASY,
         "def sort_by_length(words):\n    return sorted(words, key=lambda w: (len(w), w))",
         [("['ccc', 'a', 'bb']", "['a', 'bb', 'ccc']"), ("[]", "[]")]),
        ("merge_intervals", Difficulty.MEDIUM,
         "def merge_intervals(iv):\n    out = []\n    for lo, hi in sorted(iv):\n        if out and lo <= out[-1][1]:\n            out[-1][1] = max(out[-1][1], hi)\n        else:\n            out.append([lo, hi])\n    return out",
         [("[[1, 3], [2, 6], [8, 10]]", "[[1, 6], [8, 10]]"), ("[]", "[]")]),
        ("merge_sort", Difficulty.HARD,
         "def merge_sort(xs):\n    if len(xs) <= 1:\n        return xs\n    mid = len(xs) // 2\n    a, b = merge_sort(xs[:mid]), merge_sort(xs[mid:])\n    out = []\n    while a and b:\n        out.append(a.pop(0) if a[0] <= b[0] else b.pop(0))\n    return out + a + b",
         [("[5, 1, 4]", "[1, 4, 5]"), ("[]", "[]"), ("[2, 2, 1]", "[1, 2, 2]")]),
    ],
    "binary_search": [
        ("find_index", Difficulty.EASY,
         "def find_index(xs, t):\n    lo, hi = 0, len(xs) - 1\n    while lo <= hi:\n        mid = (lo + hi) // 2\n        if xs[mid] == t:\n            return mid\n        lo, hi = (mid + 1, hi) if xs[mid] < t else (lo, mid - 1)\n    return -1",
         [("[1, 3, 5], 5", "2"), ("[1, 3], 2", "-1")]),
        ("first_bad_version", Difficulty.MEDIUM,
         "def first_bad_version(n, bad):\n    lo, hi = 1, n\n    while lo < hi:\n        mid = (lo + hi) // 2\n        if bad(mid):\n            hi = mid\n        else:\n            lo = mid + 1\n    return lo",
         [("5, bad>=4", "4"), ("1, bad>=1", "1")]),
        ("integer_sqrt", Difficulty.HARD,
         "def integer_sqrt(n):\n    lo, hi = 0, n\n    while lo < hi:\n        mid = (lo + hi + 1) // 2\n        if mid * mid <= n:\n            lo = mid\n        else:\n            hi = mid - 1\n    return lo",
         [("8", "2"), ("0", "0"), ("16", "4")]),
    ],
    "trees": [
        ("tree_height", Difficulty.EASY,
         "def tree_height(node):\n    if node is None:\n        return 0\n    return 1 + max(tree_height(node.left), tree_height(node.right))",
         [("[1, 2, 3]", "2"), ("[]", "0")]),
        ("is_symmetric", Difficulty.MEDIUM,
         "def is_symmetric(root):\n    def mirror(a, b):\n        if not a or not b:\n            return a is b\n        return a.val == b.val and mirror(a.left, b.right) and mirror(a.right, b.left)\n    return mirror(root, root)",
         [("[1, 2, 2]", "True"), ("[1, 2, 3]", "False")]),
        ("validate_bst", Difficulty.HARD,
         "def validate_bst(node, lo=float('-inf'), hi=float('inf')):\n    if node is None:\n        return True\n    if not lo < node.val < hi:\n        return False\n    return validate_bst(node.left, lo, node.val) and validate_bst(node.right, node.val, hi)",
         [("[2, 1, 3]", "True"), ("[5, 1, 4, None, None, 3, 6]", "False"), ("[]", "True")]),
    ],
    "string_parsing": [
        ("count_words", Difficulty.EASY,
         "def count_words(s):\n    return len(s.split())",
         [("'a  b c'", "3"), ("''", "0")]),
        ("decode_repeats", Difficulty.MEDIUM,
         "def decode_repeats(s):\n    st, cur, k = [], '', 0\n    for ch in s:\n        if ch.isdigit():\n            k = k * 10 + int(ch)\n        elif ch == '[':\n            st.append((cur, k))\n            cur, k = '', 0\n        elif ch == ']':\n            prev, n = st.pop()\n            cur = prev + cur * n\n        else:\n            cur += ch\n    return cur",
         [("'3[a]2[bc]'", "'aaabcbc'"), ("''", "''")]),
        ("evaluate_rpn", Difficulty.HARD,
         "def evaluate_rpn(tokens):\n    st = []\n    for tok in tokens:\n        if tok in '+-*/':\n            b, a = st.pop(), st.pop()\n            st.append(int(eval(f'{a}{tok}{b}')))\n        else:\n            st.append(int(tok))\n    return st[0]",
         [("['2', '1', '+', '3', '*']", "9"), ("['4']", "4"), ("['6', '4', '/']", "1")]),
    ],
    "bit_manipulation": [
        ("is_power_of_two", Difficulty.EASY,
         "def is_power_of_two(n):\n    return n > 0 and n & (n - 1) == 0",
         [("8", "True"), ("6", "False")]),
        ("count_set_bits", Difficulty.MEDIUM,
         "def count_set_bits(n):\n    c = 0\n    while n:\n        n &= n - 1\n        c += 1\n    return c",
         [("11", "3"), ("0", "0")]),
        ("single_number", Difficulty.HARD,
         "def single_number(xs):\n    acc = 0\n    for x in xs:\n        acc ^= x\n    return acc",
         [("[4, 1, 2, 1, 2]", "4"), ("[7]", "7"), ("[-1, 3, 3]", "-1")]),
    ],
    "heaps": [
        ("k_smallest", Difficulty.EASY,
         "import heapq\ndef k_smallest(xs, k):\n    return heapq.nsmallest(k, xs)",
         [("[5, 1, 3], 2", "[1, 3]"), ("[], 1", "[]")]),
        ("kth_largest", Difficulty.MEDIUM,
         "import heapq\ndef kth_largest(xs, k):\n    h = []\n    for x in xs:\n        heapq.heappush(h, x)\n        if len(h) > k:\n            heapq.heappop(h)\n    return h[0]",
         [("[3, 2, 1, 5, 6, 4], 2", "5"), ("[1], 1", "1")]),
        ("merge_k_sorted", Difficulty.HARD,
         "import heapq\ndef merge_k_sorted(lists):\n    return list(heapq.merge(*lists))",
         [("[[1, 4], [2, 3]]", "[1, 2, 3, 4]"), ("[]", "[]"), ("[[], [1]]", "[1]")]),
    ],
    "graphs": [
        ("count_neighbours", Difficulty.EASY,
         "def count_neighbours(adj, v):\n    return len(adj.get(v, ()))",
         [("{1: [2, 3]}, 1", "2"), ("{}, 4", "0")]),
        ("shortest_hops", Difficulty.MEDIUM,
         "from collections import deque\ndef shortest_hops(adj, s, t):\n    dist = {s: 0}\n    q = deque([s])\n    while q:\n        v = q.popleft()\n        for w in adj.get(v, ()):\n            if w not in dist:\n                dist[w] = dist[v] + 1\n                q.append(w)\n    return dist.get(t, -1)",
         [("{1: [2], 2: [3]}, 1, 3", "2"), ("{1: []}, 1, 5", "-1")]),
        ("has_cycle", Difficulty.HARD,
         "def has_cycle(adj):\n    state = {}\n    def visit(v):\n        state[v] = 1\n        for w in adj.get(v, ()):\n            if state.get(w) == 1 or (w not in state and visit(w)):\n                return True\n        state[v] = 2\n        return False\n    return any(v not in state and visit(v) for v in list(adj))",
         [("{1: [2], 2: [1]}", "True"), ("{1: [2]}", "False"), ("{}", "False")]),
    ],
    "backtracking": [
        ("all_subsets", Difficulty.EASY,
         "def all_subsets(xs):\n    out = [[]]\n    for x in xs:\n        out += [s + [x] for s in out]\n    return out",
         [("[1, 2]", "[[], [1], [2], [1, 2]]"), ("[]", "[[]]")]),
        ("permutations", Difficulty.MEDIUM,
         "def permutations(xs):\n    if len(xs) <= 1:\n        return [xs[:]]\n    out = []\n    for i, x in enumerate(xs):\n        for p in permutations(xs[:i] + xs[i + 1:]):\n            out.append([x] + p)\n    return out",
         [("[1, 2]", "[[1, 2], [2, 1]]"), ("[]", "[[]]")]),
        ("n_queens_count", Difficulty.HARD,
         "def n_queens_count(n, row=0, cols=(), d1=(), d2=()):\n    if row == n:\n        return 1\n    total = 0\n    for c in range(n):\n        if c in cols or row - c in d1 or row + c in d2:\n            continue\n        total += n_queens_count(n, row + 1, cols + (c,), d1 + (row - c,), d2 + (row + c,))\n    return total",
         [("4", "2"), ("1", "1"), ("3", "0")]),
    ],
    "dynamic_programming": [
        ("climb_stairs", Difficulty.EASY,
         "def climb_stairs(n):\n    a, b = 1, 1\n    for _ in range(n):\n        a, b = b, a + b\n    return a",
         [("3", "3"), ("0", "1")]),
        ("coin_change", Difficulty.MEDIUM,
         "def coin_change(coins, amount):\n    inf = amount + 1\n    dp = [0] + [inf] * amount\n    for a in range(1, amount + 1):\n        for c in coins:\n            if c <= a:\n                dp[a] = min(dp[a], dp[a - c] + 1)\n    return dp[amount] if dp[amount] < inf else -1",
         [("[1, 2, 5], 11", "3"), ("[2], 3", "-1")]),
        ("edit_distance", Difficulty.HARD,
         "def edit_distance(a, b):\n    prev = list(range(len(b) + 1))\n    for i, ca in enumerate(a, 1):\n        cur = [i]\n        for j, cb in enumerate(b, 1):\n            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))\n        prev = cur\n    return prev[-1]",
         [("'kitten', 'sitting'", "3"), ("'', 'ab'", "2"), ("'a', 'a'", "0")]),
    ],
    "greedy": [
        ("max_meetings", Difficulty.EASY,
         "def max_meetings(iv):\n    end, n = float('-inf'), 0\n    for s, e in sorted(iv, key=lambda p: p[1]):\n        if s >= end:\n            end, n = e, n + 1\n    return n",
         [("[[1, 2], [2, 3], [1, 3]]", "2"), ("[]", "0")]),
        ("min_coins_greedy", Difficulty.MEDIUM,
         "def min_coins_greedy(amount, coins=(25, 10, 5, 1)):\n    n = 0\n    for c in coins:\n        n += amount // c\n        amount %= c\n    return n",
         [("63", "6"), ("0", "0")]),
        ("jump_game", Difficulty.HARD,
         "def jump_game(xs):\n    reach = 0\n    for i, x in enumerate(xs):\n        if i > reach:\n            return False\n        reach = max(reach, i + x)\n    return True",
         [("[2, 3, 1, 1, 4]", "True"), ("[3, 2, 1, 0, 4]", "False"), ("[0]", "True")]),
    ],
}

LEVEL_FRAMES = {
    1: {
        "beginner": "Pause for a moment. What did you try so far, and what happened when you ran it? Picture it like {analogy}.",
        "intermediate": "Describe your current approach in two sentences and name the first input where it behaves unexpectedly.",
        "advanced": "State the invariant your attempt relies on and check whether the failing case breaks it.",
    },
    2: {
        "beginner": "The key idea here is {concept}. Think of it like {analogy}.",
        "intermediate": "This problem is built around {concept}; recall where you have seen that pattern before.",
        "advanced": "Key idea: {concept}.",
    },
    3: {
        "beginner": "Try this plan: {strategy}. Do one small step and check it by hand.",
        "intermediate": "A workable strategy is to {strategy}, then confirm it on a tiny example.",
        "advanced": "Consider an approach that will {strategy}.",
    },
    4: {
        "beginner": "Your solution may be missing {component}. Add it and test the smallest input again.",
        "intermediate": "Check whether your solution includes {component}; without it some inputs go wrong.",
        "advanced": "Missing piece: {component}.",
    },
    5: {
        "beginner": "Look closely at {region}. Walk through it with a very small input and watch each value.",
        "intermediate": "Inspect {region}; trace it on the failing input and compare with what you expect.",
        "advanced": "Inspect {region}; the edge cases are decided there.",
    },
}

SAFE_FALLBACK = "Re-read the problem statement and list what the input guarantees before changing anything."

SUGGESTION_FRAMES = {
    "time": (
        "Check whether the work on {concept} can be done in a single pass.",
        "Look for repeated computation that a small cache could remove.",
        "Estimate the running time on the largest allowed input before moving on.",
    ),
    "space": (
        "See whether auxiliary memory can be reduced by reusing the input or a few variables.",
        "Avoid building intermediate copies when an index range would do.",
        "Consider whether the extra structure must hold every element at once.",
    ),
    "readability": (
        "Give the variables names that describe their role in {concept}.",
        "Split the main loop body into a small helper with a descriptive name.",
        "Add a one-line comment stating the invariant your loop maintains.",
    ),
    "edge_case": (
        "Test an empty input and a single-element input.",
        "Test inputs at the boundaries of the allowed range.",
        "Test an input made entirely of repeated values.",
    ),
}


def _render(frame: str, phrases: dict, solution: str) -> str:
    text = frame.format(**phrases)
    if shares_solution_span(text, solution):
        return SAFE_FALLBACK
    return text


def _item(topic: str, index: int, entry: tuple) -> ProblemItem:
    prerequisites, concept, strategy, component, region, analogy, errors = TOPICS[topic]
    name, difficulty, solution, tests = entry
    phrases = {
        "concept": concept,
        "strategy": strategy,
        "component": component,
        "region": region,
        "analogy": analogy,
    }
    templates = {
        template_key(level, tier): _render(LEVEL_FRAMES[level][tier], phrases, solution)
        for level in HINT_LEVELS
        for tier in HINT_TIERS
    }
    suggestions = {
        category: tuple(_render(frame, phrases, solution) for frame in SUGGESTION_FRAMES[category])
        for category in SUGGESTION_CATEGORIES
    }
    topics = (topic,)
    if difficulty is Difficulty.HARD and prerequisites:
        topics = (topic, prerequisites[0])
    return ProblemItem(
        id=f"{topic}-{index + 1:02d}-{name}",
        topics=topics,
        difficulty=difficulty,
        prerequisites=prerequisites,
        expected_solve_time=EXPECTED_TIMES[difficulty],
        reference_solution=solution,
        hint_templates=templates,
        tests=tuple(ItemTest(input=i, expected=e) for i, e in tests),
        suggestions=suggestions,
        error_tags=errors,
    )


def build_default_bank() -> list[ProblemItem]:
    bank = []
    for topic, entries in ITEMS.items():
        for index, entry in enumerate(entries):
            bank.append(_item(topic, index, entry))
    return bank
