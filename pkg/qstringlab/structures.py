"""Containers of strings ordered by a string comparator.

`StringTree` is an AVL tree whose keys are string references (`(seq, index)`
pairs) and whose order is decided by a comparator callable returning -1, 0
or 1.  Depending on `kind` it is a multi-set (payload: occurrence count), a
set (payload: always 1) or a map (payload: any value).  `StringHeap` is a
binary min-heap over the same kind of keys.  Shapes and heights never depend
on the comparator's answers, so the balance invariants hold even when a
quantum comparison errs.

`PrefixTree` is the classical trie the baselines use; it works on symbol
sequences read by the caller.
"""

TREE_KINDS = ('multiset', 'set', 'map')


class StateError(RuntimeError):
    """Operation not allowed in the container's current state."""


class TreeNode:
    __slots__ = ('key', 'payload', 'left', 'right', 'height')

    def __init__(self, key, payload):
        self.key = key
        self.payload = payload
        self.left = None
        self.right = None
        self.height = 1

    def __repr__(self):
        return f'TreeNode({self.key!r}, {self.payload!r})'


def _height(node):
    return node.height if node is not None else 0


def _update(node):
    node.height = 1 + max(_height(node.left), _height(node.right))


def _balance(node):
    return _height(node.left) - _height(node.right)


def _rotate_right(node):
    pivot = node.left
    node.left = pivot.right
    pivot.right = node
    _update(node)
    _update(pivot)
    return pivot


def _rotate_left(node):
    pivot = node.right
    node.right = pivot.left
    pivot.left = node
    _update(node)
    _update(pivot)
    return pivot


def _rebalance(node):
    _update(node)
    balance = _balance(node)
    if balance > 1:
        if _balance(node.left) < 0:
            node.left = _rotate_left(node.left)
        return _rotate_right(node)
    if balance < -1:
        if _balance(node.right) > 0:
            node.right = _rotate_right(node.right)
        return _rotate_left(node)
    return node


def _remove_leftmost(node):
    if node.left is None:
        return node.right
    node.left = _remove_leftmost(node.left)
    return _rebalance(node)


class StringTree:
    """Self-balancing search tree keyed by string content.

    The first key inserted for a string value stays the node's key; later
    keys that compare equal are routed to the same node.
    """

    def __init__(self, compare, kind='multiset'):
        if kind not in TREE_KINDS:
            raise ValueError(f'unknown tree kind: {kind!r}')
        self.compare = compare
        self.kind = kind
        self.root = None
        self.size = 0

    def __len__(self):
        return self.size

    @property
    def height(self):
        return _height(self.root)

    def find(self, key):
        """Return the node whose string equals `key`'s, or `None`."""
        node = self.root
        while node is not None:
            sign = self.compare(key, node.key)
            if sign == 0:
                return node
            node = node.left if sign < 0 else node.right
        return None

    def add(self, key, payload=None):
        """Insert `key` unless an equal string is present; return its node.

        New multi-set nodes start with count 0; the caller increments.
        """
        if payload is None and self.kind != 'map':
            payload = 0 if self.kind == 'multiset' else 1
        self.root, node = self._insert(self.root, key, payload)
        return node

    def _insert(self, node, key, payload):
        if node is None:
            self.size += 1
            new_node = TreeNode(key, payload)
            return new_node, new_node
        sign = self.compare(key, node.key)
        if sign == 0:
            return node, node
        if sign < 0:
            node.left, found = self._insert(node.left, key, payload)
        else:
            node.right, found = self._insert(node.right, key, payload)
        return _rebalance(node), found

    def delete(self, key):
        """Remove the node equal to `key`; return whether one was removed."""
        self.root, removed = self._delete(self.root, key)
        if removed:
            self.size -= 1
        return removed

    def _delete(self, node, key):
        if node is None:
            return None, False
        sign = self.compare(key, node.key)
        if sign < 0:
            node.left, removed = self._delete(node.left, key)
        elif sign > 0:
            node.right, removed = self._delete(node.right, key)
        else:
            removed = True
            if node.left is None:
                return node.right, True
            if node.right is None:
                return node.left, True
            successor = node.right
            while successor.left is not None:
                successor = successor.left
            successor.right = _remove_leftmost(node.right)
            successor.left = node.left
            node = successor
        if not removed:
            return node, False
        return _rebalance(node), True

    def put(self, key, value):
        node = self.add(key, value)
        node.payload = value
        return node

    def get(self, key, default=None):
        node = self.find(key)
        return default if node is None else node.payload

    def inorder(self):
        stack = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node
            node = node.right

    def is_balanced(self):
        """Check heights and AVL balance of every node (no comparisons)."""
        def check(node):
            if node is None:
                return 0
            left, right = check(node.left), check(node.right)
            if left < 0 or right < 0 or abs(left - right) > 1:
                return -1
            if node.height != 1 + max(left, right):
                return -1
            return node.height
        return check(self.root) >= 0


class StringHeap:
    """Binary min-heap of string keys.

    `add` costs at most `⌊log₂ t⌋` comparisons, `t` being the heap size.
    `get_min_and_delete` sifts bottom-up: the hole left by the minimum walks
    down along the smaller children (one comparison per level) and the last
    key is then sifted up from the leaf it reaches.  That is at most
    `2·⌊log₂ t⌋` comparisons, and about `⌊log₂ t⌋ + 2` when the last key
    belongs near the bottom, as it usually does.
    """

    def __init__(self, compare):
        self.compare = compare
        self._items = []

    def __len__(self):
        return len(self._items)

    def add(self, key):
        self._items.append(key)
        self._sift_up(len(self._items) - 1)

    def peek(self):
        if not self._items:
            raise StateError('peek on an empty heap')
        return self._items[0]

    def get_min_and_delete(self):
        items = self._items
        if not items:
            raise StateError('get_min_and_delete on an empty heap')
        top = items[0]
        last = items.pop()
        if items:
            self._sift_up(self._descend(0), last)
        return top

    def _descend(self, hole):
        items = self._items
        size = len(items)
        child = 2 * hole + 1
        while child < size:
            if child + 1 < size and self.compare(items[child + 1], items[child]) < 0:
                child += 1
            items[hole] = items[child]
            hole = child
            child = 2 * hole + 1
        return hole

    def _sift_up(self, i, key=None):
        items = self._items
        if key is None:
            key = items[i]
        while i > 0:
            parent = (i - 1) // 2
            if self.compare(key, items[parent]) >= 0:
                break
            items[i] = items[parent]
            i = parent
        items[i] = key


class TrieNode:
    __slots__ = ('edges', 'count', 'first')

    def __init__(self):
        # first symbol -> (edge label, child)
        self.edges = {}
        self.count = 0
        self.first = None

    def __repr__(self):
        if self.edges:
            return f'TrieNode, keys: {tuple(self.edges)}'
        return f'TrieNode leaf {self.count} (first: {self.first})'


class PrefixTree:
    """Path-compressed trie over fixed-length symbol sequences.

    Terminal nodes count how often their string was inserted and remember
    the index of its first occurrence.
    """

    def __init__(self):
        self.root = TrieNode()
        self.size = 0

    def __len__(self):
        return self.size

    def insert(self, symbols, index=None):
        symbols = tuple(symbols)
        node = self.root
        pos = 0
        while pos < len(symbols):
            edge = node.edges.get(symbols[pos])
            if edge is None:
                leaf = TrieNode()
                node.edges[symbols[pos]] = (symbols[pos:], leaf)
                node = leaf
                break
            label, child = edge
            common = 1
            while (
                common < len(label)
                and pos + common < len(symbols)
                and label[common] == symbols[pos + common]
            ):
                common += 1
            if common < len(label):
                middle = TrieNode()
                middle.edges[label[common]] = (label[common:], child)
                node.edges[symbols[pos]] = (label[:common], middle)
                child = middle
            node = child
            pos += common
        node.count += 1
        if node.count == 1:
            node.first = index
            self.size += 1
        return node

    def walk(self, read, length):
        """Look up the string whose `j`-th symbol is `read(j)`.

        Reads symbols lazily and stops at the first one that leaves the
        trie, so it calls `read` at most `length` times.  Returns the
        terminal node or `None`.
        """
        node = self.root
        pos = 0
        while pos < length:
            edge = node.edges.get(read(pos + 1))
            if edge is None:
                return None
            label, child = edge
            for offset in range(1, len(label)):
                if read(pos + 1 + offset) != label[offset]:
                    return None
            pos += len(label)
            node = child
        return node if node.count else None
