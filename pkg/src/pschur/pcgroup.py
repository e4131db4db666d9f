"""Power-commutator presentations of finite p-groups and collection.

Generators g_0, ..., g_{n-1} all have relative order p.  A presentation stores,
as exponent vectors in normal form,

    g_i^p       = word in g_{i+1}, ..., g_{n-1}
    [g_j, g_i]  = word in g_{j+1}, ..., g_{n-1}      (j > i)

with the convention [a, b] = a^-1 b^-1 a b.  Indices are 0-based in code and
1-based in the text format (``g1`` is generator 0).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InconsistentPresentation, InputError, ParseError
from .linalg import is_prime

Exps = tuple  # exponent vector, entries in [0, p)
Word = Sequence[tuple[int, int]]  # (generator index, exponent) pairs


def _support_ok(vec, start: int) -> bool:
    return not any(vec[:start])


@dataclass(frozen=True)
class PcPresentation:
    p: int
    n: int
    powers: tuple
    comms: tuple  # comms[j][i] for i < j
    label: str = ""
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if len(self.powers) != self.n or len(self.comms) != self.n:
            raise InputError("relation tables do not match the generator count")
        for i, v in enumerate(self.powers):
            if len(v) != self.n or not _support_ok(v, i + 1):
                raise InputError(f"power relation of g{i + 1} is not supported on later generators")
            if any(not 0 <= x < self.p for x in v):
                raise InputError("exponents must lie in [0, p)")
        for j, row in enumerate(self.comms):
            if len(row) != j:
                raise InputError("commutator table must be lower triangular")
            for i, v in enumerate(row):
                if len(v) != self.n or not _support_ok(v, j + 1):
                    raise InputError(
                        f"commutator [g{j + 1},g{i + 1}] is not supported on generators after g{j + 1}"
                    )
                if any(not 0 <= x < self.p for x in v):
                    raise InputError("exponents must lie in [0, p)")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{k + 1}" for k in range(self.n)))

    @property
    def order(self) -> int:
        return self.p ** self.n

    def power(self, i: int) -> Exps:
        return self.powers[i]

    def comm(self, j: int, i: int) -> Exps:
        if j <= i:
            raise InputError("comm(j, i) requires j > i")
        return self.comms[j][i]

    @property
    def relation_count(self) -> int:
        return self.n * (self.n + 1) // 2

    def relabel(self, label: str) -> "PcPresentation":
        return PcPresentation(self.p, self.n, self.powers, self.comms, label, self.names)

    def identity(self) -> Exps:
        return (0,) * self.n

    def unit(self, i: int, e: int = 1) -> Exps:
        v = [0] * self.n
        v[i] = e % self.p
        return tuple(v)

    def is_abelian_presentation(self) -> bool:
        return not any(any(v) for row in self.comms for v in row)

    @classmethod
    def from_words(
        cls,
        p: int,
        n: int,
        powers: dict[int, Word] | None = None,
        comms: dict[tuple[int, int], Word] | None = None,
        label: str = "",
        names: Sequence[str] = (),
        check: bool = True,
    ) -> "PcPresentation":
        """Build a presentation from relation words, collecting them to normal form.

        Missing relations are trivial.  Words for g_i^p may only use generators after
        g_i, words for [g_j, g_i] only generators after g_j; they need not be collected.
        Commutators may be given as (i, j) with i < j, in which case the inverse word is
        stored as [g_j, g_i].
        """
        powers = dict(powers or {})
        comms_in = dict(comms or {})
        cwords = {}
        for (a, b), w in comms_in.items():
            if a == b:
                raise InputError("commutator of a generator with itself")
            if a > b:
                cwords[(a, b)] = list(w)
            else:
                cwords[(b, a)] = [(g, -e) for g, e in reversed(list(w))]
        for i, w in powers.items():
            for g, _ in w:
                if not i < g < n:
                    raise InputError(f"power word of g{i + 1} uses g{g + 1}")
        for (j, i), w in cwords.items():
            if not 0 <= i < j < n:
                raise InputError(f"bad commutator index ({j + 1},{i + 1})")
            for g, _ in w:
                if not j < g < n:
                    raise InputError(f"commutator word of [g{j + 1},g{i + 1}] uses g{g + 1}")
        coll = Collector(
            p,
            n,
            [list(powers.get(i, ())) for i in range(n)],
            {(j, i): cwords.get((j, i), []) for j in range(n) for i in range(j)},
        )
        pw = tuple(coll.power_element(i)[0] for i in range(n))
        cm = tuple(tuple(coll.comm_element(j, i)[0] for i in range(j)) for j in range(n))
        pres = cls(p, n, pw, cm, label, tuple(names))
        if check:
            check_consistent(pres)
        return pres

    # text format -----------------------------------------------------------

    def to_dsl(self) -> str:
        lines = [f"# {self.label}" if self.label else "# pc presentation", f"p = {self.p}", f"gens = {self.n}"]
        for i, v in enumerate(self.powers):
            if any(v):
                lines.append(f"pow {i + 1} = {format_word(v)}")
        for j in range(self.n):
            for i in range(j):
                v = self.comms[j][i]
                if any(v):
                    lines.append(f"comm {j + 1} {i + 1} = {format_word(v)}")
        return "\n".join(lines) + "\n"


def format_word(v: Exps) -> str:
    parts = []
    for k, e in enumerate(v):
        if e == 1:
            parts.append(f"g{k + 1}")
        elif e:
            parts.append(f"g{k + 1}^{e}")
    return " ".join(parts) if parts else "1"


_TOKEN = re.compile(r"^g(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str, n: int, lineno: int | None = None) -> list[tuple[int, int]]:
    text = text.strip()
    if text in ("", "1"):
        return []
    word = []
    for tok in text.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"cannot parse word token {tok!r}", lineno)
        g = int(m.group(1))
        if not 1 <= g <= n:
            raise ParseError(f"unknown generator g{g}", lineno)
        word.append((g - 1, int(m.group(2)) if m.group(2) else 1))
    return word


def _check_support(word, above: int, lineno: int) -> None:
    # relation words may only involve generators later than the ones on the left
    low = [g for g, a in word if g <= above]
    if low:
        raise ParseError(f"relation word uses g{low[0] + 1}, only g{above + 2} onwards allowed", lineno)


def parse_dsl(text: str, label: str = "") -> PcPresentation:
    """Parse the group text format; the result is checked for consistency."""
    p = n = None
    powers, comms = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected '=' in {raw.strip()!r}", lineno)
        lhs, rhs = (s.strip() for s in line.split("=", 1))
        key = lhs.split()
        try:
            if key == ["p"]:
                p = int(rhs)
                if not is_prime(p):
                    raise ParseError(f"{p} is not prime", lineno)
            elif key == ["gens"]:
                n = int(rhs)
                if n < 0:
                    raise ParseError("negative generator count", lineno)
            elif key[0] == "pow" and len(key) == 2:
                if n is None:
                    raise ParseError("'gens' must precede relations", lineno)
                i = int(key[1]) - 1
                if not 0 <= i < n:
                    raise ParseError(f"unknown generator g{i + 1}", lineno)
                powers[i] = parse_word(rhs, n, lineno)
                _check_support(powers[i], i, lineno)
            elif key[0] == "comm" and len(key) == 3:
                if n is None:
                    raise ParseError("'gens' must precede relations", lineno)
                j, i = int(key[1]) - 1, int(key[2]) - 1
                if not (0 <= i < n and 0 <= j < n) or i == j:
                    raise ParseError(f"bad commutator indices {key[1]} {key[2]}", lineno)
                comms[(j, i)] = parse_word(rhs, n, lineno)
                _check_support(comms[(j, i)], max(i, j), lineno)
            else:
                raise ParseError(f"unknown directive {lhs!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno) from None
    if p is None or n is None:
        raise ParseError("both 'p' and 'gens' are required")
    try:
        return PcPresentation.from_words(p, n, powers, comms, label=label)
    except InputError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------------------
# Collection


class Collector:
    """Collection to normal form, optionally in a central extension by free tails.

    Elements are pairs ``(exps, tails)``; ``tails`` is an integer vector of length
    ``ntails`` (empty for the plain group).  Tails are central and of infinite order:
    the relation g_i^p = w_i becomes g_i^p = w_i * t_{power_tails[i]} and similarly
    for commutators.

    Multiplying by a generator uses  x g_i = (prefix) g_i^(a_i + 1) (tail)^g_i , with
    the conjugation by g_i computed recursively on the subgroup <g_{i+1}, ...>.  All
    intermediate results are memoised, so the collector belongs to one presentation.
    """

    def __init__(self, p, n, power_words, comm_words, power_tails=None, comm_tails=None, ntails=0):
        self.p = p
        self.n = n
        self.m = ntails
        self._pw = [list(w) for w in power_words]
        self._cw = {k: list(w) for k, w in comm_words.items()}
        self._pt = list(power_tails) if power_tails is not None else [None] * n
        self._ct = dict(comm_tails or {})
        self._zero = (0,) * n
        self._tz = (0,) * ntails
        self._mg_cache: dict = {}
        self._conj_cache: dict = {}
        self._cpow_cache: dict = {}
        self._pow_cache: dict = {}
        self._comm_cache: dict = {}
        self._inv_cache: dict = {}
        self._in_progress: set = set()

    @classmethod
    def for_presentation(cls, pres: PcPresentation) -> "Collector":
        n = pres.n
        return cls(
            pres.p,
            n,
            [_vec_to_word(v) for v in pres.powers],
            {(j, i): _vec_to_word(pres.comms[j][i]) for j in range(n) for i in range(j)},
        )

    @classmethod
    def tailed(cls, pres: PcPresentation) -> "Collector":
        """Collector for the extension with one free central tail per relation.

        Tail order: power relations of g_1..g_n first, then commutators [g_j, g_i]
        in lexicographic order of (j, i).
        """
        n = pres.n
        ptails = list(range(n))
        ctails = {}
        k = n
        for j in range(n):
            for i in range(j):
                ctails[(j, i)] = k
                k += 1
        return cls(
            pres.p,
            n,
            [_vec_to_word(v) for v in pres.powers],
            {(j, i): _vec_to_word(pres.comms[j][i]) for j in range(n) for i in range(j)},
            ptails,
            ctails,
            k,
        )

    # helpers ----------------------------------------------------------------

    def _tadd(self, a, b):
        if not self.m:
            return ()
        return tuple(x + y for x, y in zip(a, b))

    def _tunit(self, k):
        if k is None or not self.m:
            return self._tz
        t = [0] * self.m
        t[k] = 1
        return tuple(t)

    @property
    def identity(self):
        return (self._zero, self._tz)

    def gen(self, i: int, e: int = 1):
        if not 0 <= i < self.n:
            raise InputError(f"unknown generator index {i}")
        return self.collect([(i, e)])

    def element(self, exps) -> tuple:
        exps = tuple(int(x) for x in exps)
        if len(exps) != self.n or any(not 0 <= x < self.p for x in exps):
            raise InputError("not a normal-form exponent vector")
        return (exps, self._tz)

    # relation elements ------------------------------------------------------

    def power_element(self, i: int):
        """g_i^p as a collected element (including its tail)."""
        hit = self._pow_cache.get(i)
        if hit is None:
            key = ("pow", i)
            if key in self._in_progress:
                raise InputError(f"power relation of g{i + 1} refers back to itself")
            self._in_progress.add(key)
            exps, d = self._collect_exps(self._pw[i])
            self._in_progress.discard(key)
            hit = (exps, self._tadd(d, self._tunit(self._pt[i])))
            self._pow_cache[i] = hit
        return hit

    def comm_element(self, j: int, i: int):
        """[g_j, g_i] for j > i, as given by the presentation."""
        hit = self._comm_cache.get((j, i))
        if hit is None:
            exps, d = self._collect_exps(self._cw.get((j, i), []))
            hit = (exps, self._tadd(d, self._tunit(self._ct.get((j, i)))))
            self._comm_cache[(j, i)] = hit
        return hit

    def _conj_gen_pow(self, j: int, i: int, b: int):
        """(g_j^{g_i})^b = (g_j [g_j, g_i])^b."""
        key = (j, i, b)
        hit = self._cpow_cache.get(key)
        if hit is not None:
            return hit
        if b == 1:
            cexps, cd = self.comm_element(j, i)
            if cexps[j] != 0 or any(cexps[:j]):
                raise InputError(f"commutator [g{j + 1},g{i + 1}] is not supported on later generators")
            exps = list(cexps)
            exps[j] = 1
            hit = (tuple(exps), cd)
        else:
            prev = self._conj_gen_pow(j, i, b - 1)
            base = self._conj_gen_pow(j, i, 1)
            e, d = self._mul_exps(prev[0], base[0])
            hit = (e, self._tadd(self._tadd(prev[1], base[1]), d))
        self._cpow_cache[key] = hit
        return hit

    # core -------------------------------------------------------------------

    def _mg(self, a, i):
        """a * g_i on exponent vectors; returns (exps, tail delta)."""
        key = (a, i)
        hit = self._mg_cache.get(key)
        if hit is not None:
            return hit
        rest = self._zero[: i + 1] + a[i + 1 :]
        cexps, cdelta = self._conj(i, rest)
        if a[i] + 1 < self.p:
            hit = (a[:i] + (a[i] + 1,) + cexps[i + 1 :], cdelta)
        else:
            wexps, wdelta = self.power_element(i)
            if any(wexps[: i + 1]):
                raise InputError(f"power relation of g{i + 1} is not supported on later generators")
            pexps, pdelta = self._mul_exps(wexps, cexps)
            hit = (a[:i] + (0,) + pexps[i + 1 :], self._tadd(self._tadd(wdelta, cdelta), pdelta))
        self._mg_cache[key] = hit
        return hit

    def _conj(self, i, y):
        """y^{g_i} for y in <g_{i+1}, ...>."""
        key = (i, y)
        hit = self._conj_cache.get(key)
        if hit is not None:
            return hit
        j = next((k for k in range(i + 1, self.n) if y[k]), None)
        if j is None:
            hit = (self._zero, self._tz)
        else:
            b = y[j]
            rest = y[:j] + (0,) + y[j + 1 :]
            cexps, cd = self._conj_gen_pow(j, i, b)
            rexps, rd = self._conj(i, rest)
            e, d = self._mul_exps(cexps, rexps)
            hit = (e, self._tadd(self._tadd(cd, rd), d))
        self._conj_cache[key] = hit
        return hit

    def _mul_exps(self, a, b):
        d = self._tz
        for k, bk in enumerate(b):
            for _ in range(bk):
                a, dd = self._mg(a, k)
                if self.m:
                    d = self._tadd(d, dd)
        return a, d

    def _collect_exps(self, word):
        x = (self._zero, self._tz)
        for g, e in word:
            if not 0 <= g < self.n:
                raise InputError(f"word references unknown generator index {g}")
            x = self.mul(x, self._gen_power(g, e))
        return x

    def _gen_power(self, g, e):
        if e >= 0:
            x = (self._zero, self._tz)
            for _ in range(e):
                a, d = self._mg(x[0], g)
                x = (a, self._tadd(x[1], d))
            return x
        return self.power(self.inverse(self._gen_power(g, 1)), -e)

    # public element operations ---------------------------------------------

    def mul(self, x, y):
        e, d = self._mul_exps(x[0], y[0])
        if not self.m:
            return (e, ())
        return (e, self._tadd(self._tadd(x[1], y[1]), d))

    def mul_gen(self, x, i):
        e, d = self._mg(x[0], i)
        return (e, self._tadd(x[1], d))

    def collect(self, word: Word):
        """Normal form of a word given as (generator index, exponent) pairs."""
        return self._collect_exps(word)

    def inverse(self, x):
        a, t = x
        hit = self._inv_cache.get(a)
        if hit is None:
            i = next((k for k in range(self.n) if a[k]), None)
            if i is None:
                hit = (self._zero, self._tz)
            else:
                c = a[i]
                y = (self._zero[: i + 1] + a[i + 1 :], self._tz)
                gpart = (self._zero[:i] + (self.p - c,) + self._zero[i + 1 :], self._tz)
                hit = self.mul(self.mul(self.inverse(y), gpart), self.inverse(self.power_element(i)))
            self._inv_cache[a] = hit
        if not self.m:
            return hit
        return (hit[0], tuple(u - v for u, v in zip(hit[1], t)))

    def power(self, x, k: int):
        if k < 0:
            return self.power(self.inverse(x), -k)
        result = self.identity
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def commutator(self, x, y):
        return self.mul(self.mul(self.inverse(x), self.inverse(y)), self.mul(x, y))

    def conjugate(self, x, y):
        """x^y = y^-1 x y."""
        return self.mul(self.mul(self.inverse(y), x), y)


def _vec_to_word(v) -> list[tuple[int, int]]:
    return [(k, e) for k, e in enumerate(v) if e]


# ---------------------------------------------------------------------------
# Consistency


def overlaps(coll: Collector):
    """Yield (name, lhs, rhs) for the standard overlap tests of a p-group presentation.

    Both sides are products in the free group that the relations identify; the
    presentation is consistent iff every pair collects to the same normal form.
    """
    n, p = coll.n, coll.p
    g = [coll._gen_power(i, 1) for i in range(n)]
    gp = [coll.power_element(i) for i in range(n)]
    gpm1 = [coll._gen_power(i, p - 1) for i in range(n)]
    for k in range(n):
        for j in range(k):
            for i in range(j):
                yield (
                    f"g{k + 1} g{j + 1} g{i + 1}",
                    coll.mul(coll.mul(g[k], g[j]), g[i]),
                    coll.mul(g[k], coll.mul(g[j], g[i])),
                )
    for j in range(n):
        for i in range(j):
            yield (
                f"g{j + 1}^{p} g{i + 1}",
                coll.mul(gp[j], g[i]),
                coll.mul(gpm1[j], coll.mul(g[j], g[i])),
            )
            yield (
                f"g{j + 1} g{i + 1}^{p}",
                coll.mul(g[j], gp[i]),
                coll.mul(coll.mul(g[j], g[i]), gpm1[i]),
            )
    for i in range(n):
        yield (f"g{i + 1}^{p + 1}", coll.mul(gp[i], g[i]), coll.mul(g[i], gp[i]))


def is_consistent(pres: PcPresentation) -> tuple[bool, str | None]:
    """(True, None) or (False, description of the first failing overlap)."""
    try:
        coll = Collector.for_presentation(pres)
        for name, lhs, rhs in overlaps(coll):
            if lhs[0] != rhs[0]:
                return False, f"{name}: {format_word(lhs[0])} != {format_word(rhs[0])}"
    except InputError as exc:
        return False, str(exc)
    return True, None


def check_consistent(pres: PcPresentation) -> PcPresentation:
    coll = Collector.for_presentation(pres)
    for name, lhs, rhs in overlaps(coll):
        if lhs[0] != rhs[0]:
            raise InconsistentPresentation(name, format_word(lhs[0]), format_word(rhs[0]))
    return pres


def direct_sum_words(words: Iterable[Word]) -> list[tuple[int, int]]:
    out = []
    for w in words:
        out.extend(w)
    return out
