"""Symbolic linearly ordered sets with addressable elements.

An order is an expression tree over a handful of constructors.  Concrete
constructors (finite chains, N, -N, Z and their concatenations and
lexicographic products) have addressable elements; labeled orders are
opaque and carry only cardinality/discreteness flags.

Elements are addressed by paths into the tree:

    int                leaf index (Fin / NatUp / NatDown / Ints)
    ("L", a), ("R", a) descend into a concatenation
    ("pair", o, i)     descend into a lexicographic product
    START              the lower boundary of the addressed subtree; used
                       as a cut position, never as an element

Tri-valued answers use True / False / None (None = unknown).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import IllTypedAddress, SymbolicOrderOpaque

COUNTABLE = "countable"
UNCOUNTABLE = "uncountable"
UNKNOWN = "unknown"


class _Start:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "start"


START = _Start()


class LinearOrder:
    """Base class for order expressions; instances are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class Fin(LinearOrder):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("finite chain needs n >= 0")


@dataclass(frozen=True)
class NatUp(LinearOrder):
    """The natural numbers 0 < 1 < 2 < ..."""


@dataclass(frozen=True)
class NatDown(LinearOrder):
    """Negative naturals ... < -2 < -1; -1 is maximal."""


@dataclass(frozen=True)
class Ints(LinearOrder):
    """The integers."""


@dataclass(frozen=True)
class Concat(LinearOrder):
    """Every element of `left` below every element of `right`."""
    left: LinearOrder
    right: LinearOrder


@dataclass(frozen=True)
class LexProd(LinearOrder):
    """Lexicographic product; outer factor compared first."""
    outer: LinearOrder
    inner: LinearOrder


@dataclass(frozen=True)
class Labeled(LinearOrder):
    """Opaque order known only through its flags.  Always nonempty."""
    name: str
    locally_discrete: Optional[bool] = None
    countable_cofinality: Optional[bool] = None
    countable_coinitiality: Optional[bool] = None


NAT_UP = NatUp()
NAT_DOWN = NatDown()
INTS = Ints()
EMPTY = Fin(0)


def L(addr):
    return ("L", addr)


def R(addr):
    return ("R", addr)


def pair(outer_addr, inner_addr):
    return ("pair", outer_addr, inner_addr)


# -- tri-bool helpers ------------------------------------------------------

def _tri_and(*vals):
    if any(v is False for v in vals):
        return False
    if any(v is None for v in vals):
        return None
    return True


def _tri_iff(a, b):
    if a is None or b is None:
        return None
    return a == b


# -- structural queries ----------------------------------------------------

def is_empty(order: LinearOrder) -> bool:
    if isinstance(order, Fin):
        return order.n == 0
    if isinstance(order, Concat):
        return is_empty(order.left) and is_empty(order.right)
    if isinstance(order, LexProd):
        return is_empty(order.outer) or is_empty(order.inner)
    return False  # atoms are nonempty; Labeled is nonempty by convention


def has_minimum(order: LinearOrder):
    """Tri-bool: does the order have a least element?"""
    if isinstance(order, Fin):
        return order.n > 0
    if isinstance(order, NatUp):
        return True
    if isinstance(order, (NatDown, Ints)):
        return False
    if isinstance(order, Concat):
        if not is_empty(order.left):
            return has_minimum(order.left)
        return has_minimum(order.right)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return False
        return _tri_and(has_minimum(order.outer), has_minimum(order.inner))
    return None  # Labeled


def has_maximum(order: LinearOrder):
    if isinstance(order, Fin):
        return order.n > 0
    if isinstance(order, NatDown):
        return True
    if isinstance(order, (NatUp, Ints)):
        return False
    if isinstance(order, Concat):
        if not is_empty(order.right):
            return has_maximum(order.right)
        return has_maximum(order.left)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return False
        return _tri_and(has_maximum(order.outer), has_maximum(order.inner))
    return None


def minimum(order: LinearOrder):
    """Address of the least element, None if there is none."""
    if isinstance(order, Fin):
        return 0 if order.n > 0 else None
    if isinstance(order, NatUp):
        return 0
    if isinstance(order, (NatDown, Ints)):
        return None
    if isinstance(order, Concat):
        if not is_empty(order.left):
            m = minimum(order.left)
            return None if m is None else L(m)
        m = minimum(order.right)
        return None if m is None else R(m)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return None
        mo = minimum(order.outer)
        mi = minimum(order.inner)
        if mo is None or mi is None:
            return None
        return pair(mo, mi)
    raise SymbolicOrderOpaque(f"minimum of labeled order {order.name!r}")


def maximum(order: LinearOrder):
    if isinstance(order, Fin):
        return order.n - 1 if order.n > 0 else None
    if isinstance(order, NatDown):
        return -1
    if isinstance(order, (NatUp, Ints)):
        return None
    if isinstance(order, Concat):
        if not is_empty(order.right):
            m = maximum(order.right)
            return None if m is None else R(m)
        m = maximum(order.left)
        return None if m is None else L(m)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return None
        mo = maximum(order.outer)
        mi = maximum(order.inner)
        if mo is None or mi is None:
            return None
        return pair(mo, mi)
    raise SymbolicOrderOpaque(f"maximum of labeled order {order.name!r}")


# -- addresses -------------------------------------------------------------

def check_address(order: LinearOrder, addr) -> None:
    """Raise IllTypedAddress unless `addr` fits `order`."""
    if addr is START:
        return
    if isinstance(order, Fin):
        if isinstance(addr, int) and 0 <= addr < order.n:
            return
        raise IllTypedAddress(f"{addr!r} not an index of fin({order.n})")
    if isinstance(order, NatUp):
        if isinstance(addr, int) and addr >= 0:
            return
        raise IllTypedAddress(f"{addr!r} not an element of N")
    if isinstance(order, NatDown):
        if isinstance(addr, int) and addr <= -1:
            return
        raise IllTypedAddress(f"{addr!r} not an element of -N")
    if isinstance(order, Ints):
        if isinstance(addr, int):
            return
        raise IllTypedAddress(f"{addr!r} not an element of Z")
    if isinstance(order, Concat):
        if isinstance(addr, tuple) and len(addr) == 2 and addr[0] in ("L", "R"):
            side = order.left if addr[0] == "L" else order.right
            check_address(side, addr[1])
            return
        raise IllTypedAddress(f"{addr!r} does not address a concatenation")
    if isinstance(order, LexProd):
        if isinstance(addr, tuple) and len(addr) == 3 and addr[0] == "pair":
            check_address(order.outer, addr[1])
            check_address(order.inner, addr[2])
            return
        raise IllTypedAddress(f"{addr!r} does not address a product")
    if isinstance(order, Labeled):
        raise SymbolicOrderOpaque(
            f"labeled order {order.name!r} has no addressable elements")
    raise IllTypedAddress(f"unknown order node {order!r}")


def is_element(addr) -> bool:
    """True for element addresses, False for boundary cuts."""
    if addr is START:
        return False
    if isinstance(addr, tuple):
        if addr[0] in ("L", "R"):
            return is_element(addr[1])
        return is_element(addr[1]) and is_element(addr[2])
    return True


def compare(order: LinearOrder, a, b) -> int:
    """Total-order comparison of two addresses; -1, 0 or 1.

    Boundary cuts compare below every element of the region they open.
    """
    check_address(order, a)
    check_address(order, b)
    return _cmp(order, a, b)


def _cmp(order, a, b):
    if a is START and b is START:
        return 0
    if a is START:
        return -1
    if b is START:
        return 1
    if isinstance(order, (Fin, NatUp, NatDown, Ints)):
        return (a > b) - (a < b)
    if isinstance(order, Concat):
        sa, sb = a[0], b[0]
        if sa != sb:
            return -1 if sa == "L" else 1
        side = order.left if sa == "L" else order.right
        return _cmp(side, a[1], b[1])
    if isinstance(order, LexProd):
        c = _cmp(order.outer, a[1], b[1])
        if c != 0:
            return c
        return _cmp(order.inner, a[2], b[2])
    raise SymbolicOrderOpaque("cannot compare inside a labeled order")


def successor(order: LinearOrder, e):
    """Immediate successor address, or None at a maximum / open join."""
    check_address(order, e)
    if not is_element(e):
        raise IllTypedAddress("boundary cuts have no neighbors")
    return _succ(order, e)


def predecessor(order: LinearOrder, e):
    check_address(order, e)
    if not is_element(e):
        raise IllTypedAddress("boundary cuts have no neighbors")
    return _pred(order, e)


def _succ(order, e):
    if isinstance(order, Fin):
        return e + 1 if e + 1 < order.n else None
    if isinstance(order, NatUp):
        return e + 1
    if isinstance(order, NatDown):
        return e + 1 if e + 1 <= -1 else None
    if isinstance(order, Ints):
        return e + 1
    if isinstance(order, Concat):
        if e[0] == "L":
            s = _succ(order.left, e[1])
            if s is not None:
                return L(s)
            if is_empty(order.right):
                return None
            m = minimum(order.right)
            return None if m is None else R(m)
        s = _succ(order.right, e[1])
        return None if s is None else R(s)
    if isinstance(order, LexProd):
        _, eo, ei = e
        s = _succ(order.inner, ei)
        if s is not None:
            return pair(eo, s)
        so = _succ(order.outer, eo)
        if so is None:
            return None
        m = minimum(order.inner)
        return None if m is None else pair(so, m)
    raise SymbolicOrderOpaque("no neighbors inside a labeled order")


def _pred(order, e):
    if isinstance(order, Fin):
        return e - 1 if e - 1 >= 0 else None
    if isinstance(order, NatUp):
        return e - 1 if e - 1 >= 0 else None
    if isinstance(order, NatDown):
        return e - 1
    if isinstance(order, Ints):
        return e - 1
    if isinstance(order, Concat):
        if e[0] == "R":
            p = _pred(order.right, e[1])
            if p is not None:
                return R(p)
            if is_empty(order.left):
                return None
            m = maximum(order.left)
            return None if m is None else L(m)
        p = _pred(order.left, e[1])
        return None if p is None else L(p)
    if isinstance(order, LexProd):
        _, eo, ei = e
        p = _pred(order.inner, ei)
        if p is not None:
            return pair(eo, p)
        po = _pred(order.outer, eo)
        if po is None:
            return None
        m = maximum(order.inner)
        return None if m is None else pair(po, m)
    raise SymbolicOrderOpaque("no neighbors inside a labeled order")


# -- canonical form --------------------------------------------------------

def canonicalize(order: LinearOrder) -> LinearOrder:
    """Rewrite to canonical form.

    Empty factors vanish, concatenation is reassociated to the right, and
    lexicographic products with a finite outer factor are flattened into
    repeated concatenation.  Idempotent.
    """
    if isinstance(order, Concat):
        left = canonicalize(order.left)
        right = canonicalize(order.right)
        if is_empty(left):
            return right
        if is_empty(right):
            return left
        if isinstance(left, Concat):
            return canonicalize(Concat(left.left, Concat(left.right, right)))
        return Concat(left, right)
    if isinstance(order, LexProd):
        outer = canonicalize(order.outer)
        inner = canonicalize(order.inner)
        if is_empty(outer) or is_empty(inner):
            return EMPTY
        if outer == Fin(1):
            return inner
        if inner == Fin(1):
            return outer
        if isinstance(outer, Fin):
            acc = inner
            for _ in range(outer.n - 1):
                acc = Concat(inner, acc)
            return canonicalize(acc)
        return LexProd(outer, inner)
    return order


def segments(order: LinearOrder):
    """The canonical right-nested concatenation chain as a list."""
    order = canonicalize(order)
    out = []
    while isinstance(order, Concat):
        out.append(order.left)
        order = order.right
    out.append(order)
    return out


# -- discreteness / cardinality -------------------------------------------

def is_locally_discrete(order: LinearOrder):
    """Tri-bool: every element has immediate neighbors where it should."""
    if isinstance(order, (Fin, NatUp, NatDown, Ints)):
        return True
    if isinstance(order, Labeled):
        return order.locally_discrete
    if isinstance(order, Concat):
        if is_empty(order.left):
            return is_locally_discrete(order.right)
        if is_empty(order.right):
            return is_locally_discrete(order.left)
        join = _tri_iff(has_maximum(order.left), has_minimum(order.right))
        return _tri_and(is_locally_discrete(order.left),
                        is_locally_discrete(order.right), join)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return True
        hmin = has_minimum(order.inner)
        hmax = has_maximum(order.inner)
        if hmax is False and hmin is False:
            # fibers absorb all joins, e.g. anything x Z
            return is_locally_discrete(order.inner)
        if hmax is True and hmin is True:
            return _tri_and(is_locally_discrete(order.outer),
                            is_locally_discrete(order.inner))
        if order.outer == Fin(1):
            return is_locally_discrete(order.inner)
        if hmax is None or hmin is None:
            return None
        return False  # half-open fibers break at every outer step
    raise TypeError(f"unknown order node {order!r}")


def cofinality_class(order: LinearOrder) -> str:
    """Countable / uncountable / unknown cofinality of the order."""
    if isinstance(order, (Fin, NatUp, NatDown, Ints)):
        return COUNTABLE
    if isinstance(order, Labeled):
        flag = order.countable_cofinality
        if flag is True:
            return COUNTABLE
        if flag is False:
            return UNCOUNTABLE
        return UNKNOWN
    if isinstance(order, Concat):
        if not is_empty(order.right):
            return cofinality_class(order.right)
        return cofinality_class(order.left)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return COUNTABLE
        hm = has_maximum(order.outer)
        co = cofinality_class(order.outer)
        ci = cofinality_class(order.inner)
        if hm is True:
            return ci
        if hm is False:
            return co
        if co == UNCOUNTABLE:
            return UNCOUNTABLE  # uncountable cofinality rules out a maximum
        if co == COUNTABLE and ci == COUNTABLE:
            return COUNTABLE
        return UNKNOWN
    raise TypeError(f"unknown order node {order!r}")


def coinitiality_class(order: LinearOrder) -> str:
    if isinstance(order, (Fin, NatUp, NatDown, Ints)):
        return COUNTABLE
    if isinstance(order, Labeled):
        flag = order.countable_coinitiality
        if flag is True:
            return COUNTABLE
        if flag is False:
            return UNCOUNTABLE
        return UNKNOWN
    if isinstance(order, Concat):
        if not is_empty(order.left):
            return coinitiality_class(order.left)
        return coinitiality_class(order.right)
    if isinstance(order, LexProd):
        if is_empty(order.outer) or is_empty(order.inner):
            return COUNTABLE
        hm = has_minimum(order.outer)
        co = coinitiality_class(order.outer)
        ci = coinitiality_class(order.inner)
        if hm is True:
            return ci
        if hm is False:
            return co
        if co == UNCOUNTABLE:
            return UNCOUNTABLE
        if co == COUNTABLE and ci == COUNTABLE:
            return COUNTABLE
        return UNKNOWN
    raise TypeError(f"unknown order node {order!r}")


def thread_completion(label: LinearOrder) -> LinearOrder:
    """Close a thread label into the chain N . (label x Z) . -N."""
    label = canonicalize(label)
    return canonicalize(Concat(NAT_UP, Concat(LexProd(label, INTS), NAT_DOWN)))


# -- restriction to a cut --------------------------------------------------

def restrict_below(order: LinearOrder, cut) -> LinearOrder:
    """Order type of the elements strictly below `cut`."""
    check_address(order, cut)
    return canonicalize(_below(order, cut))


def restrict_from(order: LinearOrder, cut) -> LinearOrder:
    """Order type of the elements at or above `cut`."""
    check_address(order, cut)
    return canonicalize(_from(order, cut))


def _below(order, cut):
    if cut is START:
        return EMPTY
    if isinstance(order, Fin):
        return Fin(cut)
    if isinstance(order, NatUp):
        return Fin(cut)
    if isinstance(order, NatDown):
        return NAT_DOWN
    if isinstance(order, Ints):
        return NAT_DOWN
    if isinstance(order, Concat):
        if cut[0] == "L":
            return _below(order.left, cut[1])
        return Concat(order.left, _below(order.right, cut[1]))
    if isinstance(order, LexProd):
        _, co, ci = cut
        return Concat(LexProd(_below(order.outer, co), order.inner),
                      _below(order.inner, ci))
    raise SymbolicOrderOpaque("cannot cut inside a labeled order")


def _from(order, cut):
    if cut is START:
        return order
    if isinstance(order, Fin):
        return Fin(order.n - cut)
    if isinstance(order, NatUp):
        return NAT_UP
    if isinstance(order, NatDown):
        return Fin(-cut)
    if isinstance(order, Ints):
        return NAT_UP
    if isinstance(order, Concat):
        if cut[0] == "L":
            return Concat(_from(order.left, cut[1]), order.right)
        return _from(order.right, cut[1])
    if isinstance(order, LexProd):
        _, co, ci = cut
        return Concat(_from(order.inner, ci),
                      LexProd(_above(order.outer, co), order.inner))
    raise SymbolicOrderOpaque("cannot cut inside a labeled order")


def _above(order, cut):
    """Order type of the elements strictly above the element `cut`."""
    if isinstance(order, Fin):
        return Fin(order.n - cut - 1)
    if isinstance(order, NatUp):
        return NAT_UP
    if isinstance(order, NatDown):
        return Fin(-cut - 1)
    if isinstance(order, Ints):
        return NAT_UP
    if isinstance(order, Concat):
        if cut[0] == "L":
            return Concat(_above(order.left, cut[1]), order.right)
        return _above(order.right, cut[1])
    if isinstance(order, LexProd):
        _, co, ci = cut
        return Concat(_above(order.inner, ci),
                      LexProd(_above(order.outer, co), order.inner))
    raise SymbolicOrderOpaque("cannot cut inside a labeled order")


# -- grammar ---------------------------------------------------------------

def serialize(order: LinearOrder) -> str:
    if isinstance(order, Fin):
        return "0" if order.n == 0 else f"fin({order.n})"
    if isinstance(order, NatUp):
        return "N"
    if isinstance(order, NatDown):
        return "-N"
    if isinstance(order, Ints):
        return "Z"
    if isinstance(order, Concat):
        return f"({serialize(order.left)} . {serialize(order.right)})"
    if isinstance(order, LexProd):
        return f"({serialize(order.outer)} * {serialize(order.inner)})"
    if isinstance(order, Labeled):
        parts = [order.name]
        tri = {True: "countable", False: "uncountable", None: None}
        if order.countable_cofinality is not None:
            parts.append(f"cofinal={tri[order.countable_cofinality]}")
        if order.countable_coinitiality is not None:
            parts.append(f"coinitial={tri[order.countable_coinitiality]}")
        if order.locally_discrete is not None:
            parts.append(f"discrete={'true' if order.locally_discrete else 'false'}")
        return f"label({', '.join(parts)})"
    raise TypeError(f"unknown order node {order!r}")


class _OrderParser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, expected):
        raise IllTypedAddress  # placeholder, replaced below

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token):
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            self.fail(repr(token))
        self.pos += len(token)

    def fail(self, expected):
        from .errors import QuiverSyntaxError
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        raise QuiverSyntaxError(line, col, expected)

    def ident(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] in "_-"):
            self.pos += 1
        if self.pos == start:
            self.fail("identifier")
        return self.text[start:self.pos]

    def number(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("number")
        return int(self.text[start:self.pos])

    def parse(self):
        order = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("end of expression")
        return order

    def expr(self):
        c = self.peek()
        if c == "(":
            self.expect("(")
            left = self.expr()
            self.skip_ws()
            op = self.peek()
            if op not in ".*":
                self.fail("'.' or '*'")
            self.pos += 1
            right = self.expr()
            self.expect(")")
            return Concat(left, right) if op == "." else LexProd(left, right)
        if c == "0":
            self.pos += 1
            return EMPTY
        if self.text.startswith("fin", self.pos):
            self.pos += 3
            self.expect("(")
            n = self.number()
            self.expect(")")
            return Fin(n)
        if self.text.startswith("label", self.pos):
            self.pos += 5
            self.expect("(")
            name = self.ident()
            flags = {}
            while self.peek() == ",":
                self.expect(",")
                key = self.ident()
                self.expect("=")
                val = self.ident()
                flags[key] = val
            self.expect(")")
            return self._labeled(name, flags)
        if c == "-":
            self.expect("-N")
            return NAT_DOWN
        if c == "N":
            self.pos += 1
            return NAT_UP
        if c == "Z":
            self.pos += 1
            return INTS
        self.fail("order expression")

    def _labeled(self, name, flags):
        card = {"countable": True, "uncountable": False, "unknown": None}
        boolean = {"true": True, "false": False, "unknown": None}
        for key in flags:
            if key not in ("cofinal", "coinitial", "discrete"):
                self.fail("flag among cofinal/coinitial/discrete")
        try:
            return Labeled(
                name,
                locally_discrete=boolean[flags.get("discrete", "unknown")],
                countable_cofinality=card[flags.get("cofinal", "unknown")],
                countable_coinitiality=card[flags.get("coinitial", "unknown")],
            )
        except KeyError:
            self.fail("flag value")


def parse_order(text: str) -> LinearOrder:
    return _OrderParser(text).parse()


# -- address text form (used in section files) -----------------------------

def serialize_address(addr) -> str:
    if addr is START:
        return "start"
    if isinstance(addr, int):
        return str(addr)
    if addr[0] in ("L", "R"):
        return f"{addr[0]}({serialize_address(addr[1])})"
    return f"pair({serialize_address(addr[1])}, {serialize_address(addr[2])})"


def parse_address(text: str):
    text = text.strip()
    if text == "start":
        return START
    if text.startswith("L(") and text.endswith(")"):
        return L(parse_address(text[2:-1]))
    if text.startswith("R(") and text.endswith(")"):
        return R(parse_address(text[2:-1]))
    if text.startswith("pair(") and text.endswith(")"):
        body = text[5:-1]
        depth = 0
        for k, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return pair(parse_address(body[:k]), parse_address(body[k + 1:]))
        raise IllTypedAddress(f"malformed pair address {text!r}")
    try:
        return int(text)
    except ValueError:
        raise IllTypedAddress(f"malformed address {text!r}") from None
