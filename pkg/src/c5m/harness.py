"""Embedded reference tables, curve/eigensystem matching, and the fake-curve verifier."""
from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass, field as dfield
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .field import FieldElement, PrimeIdealO, prime_from_generator, IdealO, SQRT5
from .elliptic import WeierstrassCurve, conductor, tate_local, count_points

log = logging.getLogger(__name__)

UNAVAILABLE = "unavailable"   # printed bullet: bad prime for that level
MISSING = "missing"           # printed blank entry

COLUMNS = ("2", "5", "11a", "11b", "11c", "11d", "31a", "31b", "31c", "31d",
           "41a", "41b", "41c", "41d")


def data_dir() -> Path:
    return Path(str(resources.files("c5m") / "data" / "tables"))


def _read(path: Path) -> list:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def verify_checksums(directory: Path | None = None) -> dict:
    """Compare every CSV with the SHA256SUMS manifest; returns {name: ok}."""
    directory = Path(directory) if directory else data_dir()
    out = {}
    for line in (directory / "SHA256SUMS").read_text().splitlines():
        digest, name = line.split()
        out[name] = hashlib.sha256((directory / name).read_bytes()).hexdigest() == digest
    return out


def write_checksums(directory: Path | None = None) -> None:
    directory = Path(directory) if directory else data_dir()
    lines = []
    for p in sorted(directory.glob("*.csv")):
        lines.append(f"{hashlib.sha256(p.read_bytes()).hexdigest()}  {p.name}")
    (directory / "SHA256SUMS").write_text("\n".join(lines) + "\n")


def _label_norm(label: str) -> int:
    return int(label.rstrip("abcdefgh"))


def _cell(x: str):
    if x in (UNAVAILABLE, MISSING):
        return x
    return int(x)


@dataclass
class EigenRow:
    label: str
    index: int           # 0-based position among rows with the same label
    values: tuple        # 14 entries: int, UNAVAILABLE or MISSING

    def value(self, column: str):
        return self.values[COLUMNS.index(column)]


@dataclass
class ReferenceTables:
    eisenstein: dict
    levels: dict                 # label -> generator
    cuspidal_dims: dict          # label -> dim
    hecke_primes: list           # [(rational prime, index, PrimeIdealO)] in column order
    eigen_rows: list             # [EigenRow]
    charpolys_3721: list         # [(rational prime, index, coefficients high -> low)]
    curves: dict                 # label -> WeierstrassCurve
    witness_curve: WeierstrassCurve
    g_values: list               # [(rational prime, index, rational part, sqrt5 part)]
    mordell_weil: list
    attributions: list

    def rows(self, label: str) -> list:
        return [r for r in self.eigen_rows if r.label == label]

    def column_prime(self, column: str) -> PrimeIdealO:
        return self.hecke_primes[COLUMNS.index(column)][2]

    def level_ideal(self, label: str) -> IdealO:
        return IdealO([self.levels[label]])


@lru_cache(maxsize=4)
def load_tables(directory: str | None = None, check: bool = True) -> ReferenceTables:
    d = Path(directory) if directory else data_dir()
    if check:
        bad = [k for k, ok in verify_checksums(d).items() if not ok]
        if bad:
            raise ValueError(f"checksum mismatch for {bad}")
    eis = {r["type"]: int(r["dim"]) for r in _read(d / "eisenstein.csv")}
    levels = {r["label"]: FieldElement.parse(r["generator"]) for r in _read(d / "levels.csv")}
    dims = {r["label"]: int(r["dim"]) for r in _read(d / "cuspidal_dims.csv")}
    hp = [(int(r["rational_prime"]), int(r["index"]), prime_from_generator(FieldElement.parse(r["generator"])))
          for r in _read(d / "hecke_primes.csv")]
    rows = []
    counts = {}
    for r in _read(d / "eigenvalues.csv"):
        lab = r["label"]
        i = counts.get(lab, 0)
        counts[lab] = i + 1
        rows.append(EigenRow(lab, i, tuple(_cell(r[c]) for c in COLUMNS)))
    cps = [(int(r["rational_prime"]), int(r["index"]), tuple(int(x) for x in r["coefficients_high_to_low"].split()))
           for r in _read(d / "charpolys_3721.csv")]
    curves = {r["label"]: WeierstrassCurve.from_strings([r[k] for k in ("a1", "a2", "a3", "a4", "a6")])
              for r in _read(d / "curves.csv")}
    app = _read(d / "witness_curve.csv")[0]
    witness = WeierstrassCurve.from_strings([app[k] for k in ("a1", "a2", "a3", "a4", "a6")])
    g = [(int(r["rational_prime"]), int(r["index"]), int(r["rational_part"]), int(r["sqrt5_part"]))
         for r in _read(d / "hilbert_g_3025.csv")]
    mw = _read(d / "mordell_weil.csv")
    attr = _read(d / "attributions.csv")
    return ReferenceTables(eis, levels, dims, hp, rows, cps, curves, witness, g, mw, attr)


# ---------------------------------------------------------------------------
# matching curves against eigenvalue rows

@dataclass
class Comparison:
    column: str
    expected: object
    computed: object
    verdict: str      # "match", "mismatch", "bad-ok", "bad-mismatch", "skipped"


@dataclass
class MatchReport:
    curve_id: str
    level_label: str
    conductor_norm: int
    conductor_ok: bool
    records: list = dfield(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.conductor_ok and all(r.verdict in ("match", "bad-ok", "skipped") for r in self.records)

    def summary(self) -> str:
        bad = [r for r in self.records if r.verdict not in ("match", "bad-ok", "skipped")]
        s = f"{self.curve_id} vs {self.level_label}: conductor {self.conductor_norm}"
        s += " ok" if self.conductor_ok else " MISMATCH"
        s += f", {len(self.records) - len(bad)}/{len(self.records)} columns consistent"
        return s


def curve_column_values(E: WeierstrassCurve, tables: ReferenceTables | None = None) -> tuple:
    """(conductor norm, {column: a_q or UNAVAILABLE at bad primes})."""
    tables = tables or load_tables()
    N, fs = conductor(E)
    bad = {P for P, _ in fs}
    vals = {}
    for col, (_, _, P) in zip(COLUMNS, tables.hecke_primes):
        if P in bad:
            vals[col] = UNAVAILABLE
        else:
            loc = tate_local(E, P)
            vals[col] = count_points(loc.model, P)[1]
    return N, vals


def match_curve(E: WeierstrassCurve, row: EigenRow | None, curve_id: str = "",
                tables: ReferenceTables | None = None, label: str | None = None) -> MatchReport:
    """Compare a_q of E with an eigenvalue row at the 14 tabulated primes.

    A bullet is consistent when the rational prime under its column divides the
    conductor norm (no Hecke operator was tabulated at any prime over such p).  With
    ``row=None`` only the conductor is checked against ``label``.
    """
    N, vals = curve_column_values(E, tables)
    label = row.label if row is not None else label
    rep = MatchReport(curve_id or repr(E), label, N, N == _label_norm(label))
    if row is None:
        return rep
    for col in COLUMNS:
        exp, got = row.value(col), vals[col]
        p = int(col.rstrip("abcd"))
        if exp == MISSING:
            verdict = "skipped"
        elif exp == UNAVAILABLE:
            verdict = "bad-ok" if N % p == 0 else "bad-mismatch"
        elif got == UNAVAILABLE:
            verdict = "bad-mismatch"
        else:
            verdict = "match" if exp == got else "mismatch"
        rep.records.append(Comparison(col, exp, got, verdict))
    return rep


# ---------------------------------------------------------------------------
# the fake elliptic curve at 3025

def conjugate_pairs(tables: ReferenceTables, rational_prime: int) -> list:
    """Pairs of column names {r, conj(r)} among the columns over a split rational prime."""
    cols = [c for c in COLUMNS if c.rstrip("abcd") == str(rational_prime)]
    seen, out = set(), []
    for c in cols:
        if c in seen:
            continue
        P = tables.column_prime(c)
        Pc = P.conj()
        mate = next(d for d in cols if tables.column_prime(d) == Pc)
        seen |= {c, mate}
        out.append((c, mate))
    return out


def fplus_generator(P: PrimeIdealO) -> FieldElement:
    """A generator of the prime of F+ below P (the relative norm of a generator of P)."""
    g = P.generator * P.generator.conj()
    return g


@dataclass
class FakeCurveReport:
    records: list = dfield(default_factory=list)   # (prime, relation, expected, observed, ok)
    bijections: dict = dfield(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r[-1] for r in self.records)


def _g_value(rat: int, sq: int):
    """a(g) = rat + sq*sqrt5 as (rat, sq)."""
    return rat, sq


def verify_fake_curve(tables: ReferenceTables | None = None, row: EigenRow | None = None,
                      primes=(2, 31, 41)) -> FakeCurveReport:
    """Check the split/inert relations between the third class at 3025 and the g-table."""
    tables = tables or load_tables()
    row = row or tables.rows("3025")[2]
    rep = FakeCurveReport()
    g = {}
    for p, i, a, b in tables.g_values:
        g.setdefault(p, []).append((a, b))
    for p in primes:
        if p % 5 == 1:
            # q splits in F+ and each factor splits in F: a_r = a_rbar = a_q(g)
            pairs = conjugate_pairs(tables, p)
            xi_vals = []
            ok = True
            for c1, c2 in pairs:
                v1, v2 = row.value(c1), row.value(c2)
                ok = ok and v1 == v2
                xi_vals.append(v1)
            gv = g[p]
            if any(b != 0 for _, b in gv):
                ok = False
            g_ints = [a for a, _ in gv]
            # the unique consistent bijection between pairs and g-values
            assign = _bijection(xi_vals, g_ints)
            ok = ok and assign is not None
            if assign is not None:
                rep.bijections[p] = {f"{c1}/{c2} over ({fplus_generator(tables.column_prime(c1)).pretty()})":
                                     f"g[{j}]" for (c1, c2), j in zip(pairs, assign)}
            rep.records.append((p, "split", sorted(g_ints), sorted(xi_vals), ok))
        elif p % 5 in (2, 3):
            # (p) is inert in F+ (norm p^2) and inert in F: a(xi) = a(g)^2 - 2 p^2
            (a, b), = g[p]
            expected = a * a + 5 * b * b - 2 * p * p if a == 0 or b == 0 else None
            col = str(p)
            if col not in COLUMNS:
                continue
            obs = row.value(col)
            rep.records.append((p, "inert", expected, obs, expected is not None and obs == expected))
        elif p % 5 == 4:
            # split in F+, each factor inert in F: not tabulated for this row's columns
            continue
    return rep


def _bijection(xi_vals: list, g_vals: list):
    """Indices j_k with xi_vals[k] == g_vals[j_k] forming a bijection, or None."""
    import itertools
    sols = [perm for perm in itertools.permutations(range(len(g_vals)))
            if all(xi_vals[k] == g_vals[j] for k, j in enumerate(perm))]
    if not sols:
        return None
    return sols[0]


# ---------------------------------------------------------------------------
# accounting for every cuspidal class

@dataclass
class Attribution:
    label: str
    row: int
    source: str
    detail: str
    verified: bool
    note: str = ""


def _galois_images(x: FieldElement) -> list:
    return [x.galois(k) for k in (1, 2, 3, 4)]


def _divides_up_to_galois(small: FieldElement, big: FieldElement) -> bool:
    for s in _galois_images(small):
        if (big / s).is_integral():
            return True
    return False


def _conjugation_symmetric(tables: ReferenceTables, row: EigenRow) -> bool:
    for p in (11, 31, 41):
        for c1, c2 in conjugate_pairs(tables, p):
            if row.value(c1) != row.value(c2):
                return False
    return True


def _agree(r1: EigenRow, r2: EigenRow) -> bool:
    common = [c for c in COLUMNS if isinstance(r1.value(c), int) and isinstance(r2.value(c), int)]
    return bool(common) and all(r1.value(c) == r2.value(c) for c in common)


def cross_account(tables: ReferenceTables | None = None, check_curves: bool = True) -> list:
    """Attribute every cuspidal class of the tables and check each attribution."""
    tables = tables or load_tables()
    out = []
    for a in tables.attributions:
        lab, i, src, det = a["label"], int(a["row"]), a["source"], a["detail"]
        rows = tables.rows(lab)
        row = rows[i] if i < len(rows) else None
        ok, note = False, ""
        if src == "curve/F":
            E = tables.witness_curve if det == "witness" else tables.curves[det]
            if check_curves:
                rep = match_curve(E, row, det, tables)
                ok, note = rep.passed, rep.summary()
            else:
                ok = True
        elif src == "oldclass":
            lower = tables.rows(det)
            ok = any(_agree(row, r) for r in lower) and \
                _divides_up_to_galois(tables.levels[det], tables.levels[lab])
            note = f"eigenvalues agree with level {det}, which divides {lab}"
        elif src in ("curve/Q-pair", "curve/F+"):
            ok = _conjugation_symmetric(tables, row)
            note = "eigenvalues invariant under complex conjugation of primes"
        elif src == "hilbert" and det == "fake":
            rep = verify_fake_curve(tables, row)
            ok, note = rep.passed, f"fake curve relations at {[r[0] for r in rep.records]}"
        elif src == "hilbert" and det == "charpoly":
            ok = len(tables.charpolys_3721) == 14 and tables.cuspidal_dims.get(lab) == 2
            note = "two-dimensional block described by its characteristic polynomials"
        out.append(Attribution(lab, i, src, det, ok, note))
    accounted = {(x.label, x.row) for x in out}
    for r in tables.eigen_rows:
        if (r.label, r.index) not in accounted:
            out.append(Attribution(r.label, r.index, "unexplained", "", False))
    return out
