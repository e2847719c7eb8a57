"""End-to-end acceptance checks, one test per criterion, each with its time limit.

Every test prints a single PASS/FAIL line (visible with ``pytest -s`` or in the
captured output of ``pytest -v``).
"""

import contextlib
import json
import random
import time
from pathlib import Path

from g2lattice import linalg
from g2lattice.building import VertexType, classify_vertex, standard_lattice, type3_middle
from g2lattice.cli import main, random_isotropic
from g2lattice.forms import gram_standard_form
from g2lattice.groups import RelatedTriple, is_related_triple, random_automorphism, rho, theta
from g2lattice.lattice import Lattice, discriminant_class, dual, is_order, length, product_span, scale
from g2lattice.octonion import BASIS_NAMES, IDENTITY_NAMES, OctonionElement, bilinear, check_identities, left_ideal, norm, para_mul
from g2lattice.reduction import Refutation, certificate_verify, l2_lattice, random_lattice, reduce_lattice, standard_basis_type23
from g2lattice.scalars import BaseField, RationalScalar

F5 = BaseField(5)
Q = BaseField(None)
GOLDEN = Path(__file__).parent / "golden"


@contextlib.contextmanager
def criterion(capsys, number, title, limit):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= limit:
            raise AssertionError(f"took {elapsed:.2f} s, limit {limit} s")
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f} s, limit {limit} s)")


def mono(exps, field=F5):
    return Lattice.monomial(field, exps)


def test_criterion_1_table_fidelity(capsys):
    with criterion(capsys, 1, "para-octonion product table matches the golden table byte for byte", 1):
        one = RationalScalar.from_int(F5, 1)
        lines = ["x\\y " + " ".join(f"{n:>4}" for n in BASIS_NAMES)]
        for i, name in enumerate(BASIS_NAMES):
            cells = []
            for j in range(8):
                z = para_mul(OctonionElement.basis(F5, i), OctonionElement.basis(F5, j))
                nz = [k for k in range(8) if not z[k].is_zero()]
                if not nz:
                    cells.append("   .")
                    continue
                (k,) = nz
                cells.append(f"{'' if z[k] == one else '-'}{BASIS_NAMES[k]}".rjust(4))
            lines.append(f"{name:>3} " + " ".join(cells))
        assert ("\n".join(lines) + "\n").encode() == (GOLDEN / "product_table.txt").read_bytes()


def test_criterion_2_identity_suite(capsys):
    with criterion(capsys, 2, "identity suite, 500 samples over F5(t), degree 3, zero failures", 30):
        report = check_identities(seed=2024, count=500, degree_bound=3, field=F5)
        assert set(report["identities"]) == set(IDENTITY_NAMES)
        failures = {k: v for k, v in report["identities"].items() if v["failed"]}
        assert not failures, failures
        assert all(v["passed"] == 500 for v in report["identities"].values())


def test_criterion_3_standard_lattices(capsys):
    with criterion(capsys, 3, "standard lattices: classification, duals, products, middle lattice", 5):
        L1, L2, L3 = (standard_lattice(T, F5) for T in (1, 2, 3))
        assert [classify_vertex(L).verdict for L in (L1, L2, L3)] == [VertexType.Type1, VertexType.Type2, VertexType.Type3]
        assert dual(L1) == L1
        # L2^dual = <e1, e2, u1, t^-1 u2, u3, t^-1 v1, v2, v3>
        assert dual(L2) == mono([0, 0, 0, -1, 0, -1, 0, 0])
        # L3 = <e1, e2, t u1, t u2, u3, v1, v2, t v3>, dual by the pairing rule
        assert dual(L3) == mono([0, 0, 0, 0, -1, -1, -1, 0])
        D2 = dual(L2)
        assert product_span(D2, D2) == scale(L2, RationalScalar.t_power(F5, -1))
        M = type3_middle(L3)
        assert M == mono([0, 0, 0, 0, -1, 0, 0, 1])
        assert dual(M) == M


def test_criterion_4_lengths_and_discriminants(capsys):
    with criterion(capsys, 4, "lengths 0/4/6, even discriminant, no quasi-split profile in 200 lattices", 60):
        for T, l in ((1, 0), (2, 4), (3, 6)):
            L = standard_lattice(T, F5)
            assert length(L, dual(L)) == l
            assert discriminant_class(L)["parity"] == 0
        for seed in range(200):
            T = 1 + seed % 3
            L = random_lattice(T, seed, 1 + seed % 5, F5)
            prof = gram_standard_form(L)
            assert prof.kind == "split"
            assert prof.l == {1: 0, 2: 4, 3: 6}[T]
            assert discriminant_class(L)["parity"] == 0


def test_criterion_5_round_trip_reduction(capsys):
    with criterion(capsys, 5, "reduction round trip, 3 types x 50 seeds, certificates verify", 600):
        failures = []
        for T in (1, 2, 3):
            for seed in range(50):
                w = 1 + seed % 5
                L = random_lattice(T, 1000 * T + seed, w, F5)
                if classify_vertex(L).verdict != VertexType(T):
                    failures.append((T, seed, "classification"))
                    continue
                res = reduce_lattice(L, 32)
                if isinstance(res, Refutation) or res.vertex_type != VertexType(T):
                    failures.append((T, seed, "reduction"))
                    continue
                ok, why = certificate_verify(res.transformer, L, T)
                if not ok:
                    failures.append((T, seed, why))
        assert not failures, failures


def test_criterion_6_length_two_exclusion(capsys):
    with criterion(capsys, 6, "l = 2 lattices: order check fails and the reduction refutes with valuation -1", 120):
        for seed in range(100):
            w = 0 if seed % 2 == 0 else 1 + seed % 5
            L = l2_lattice(seed, w, F5)
            assert L.member(OctonionElement.para_unit(F5))
            assert length(L, dual(L)) == 2
            ok, witness = is_order(L)
            assert not ok and witness["kind"] == "product_not_in_lattice"
            x, y = L.vectors()[witness["left"]], L.vectors()[witness["right"]]
            assert not L.member(para_mul(x, y))
            res = standard_basis_type23(L)
            assert isinstance(res, Refutation)
            assert res.valuation == -1 and res.recheck(L)


def test_criterion_7_triality_subspaces(capsys):
    with criterion(capsys, 7, "x * C_s is a rank 4 isotropic subspace determined by the line of x", 60):
        rng = random.Random(7)
        samples = [random_isotropic(rng, F5) for _ in range(100)]
        ideals = []
        for x in samples:
            assert norm(x).is_zero() and not x.is_zero()
            U = left_ideal(x)
            assert U.rank == 4
            assert all(bilinear(a, b).is_zero() for a in U.basis for b in U.basis)
            c = RationalScalar.from_laurent(F5, rng.randint(-2, 2), [rng.randrange(1, 5), rng.randrange(5)])
            assert left_ideal(x.scale(c)) == U
            ideals.append(U)
        for i in range(len(samples) - 1):
            x, y = samples[i], samples[i + 1]
            if linalg.rank([list(x.coords), list(y.coords)]) == 2:
                assert ideals[i] != ideals[i + 1]


def test_criterion_8_s3_action(capsys):
    with criterion(capsys, 8, "S3 action on 50 diagonal related triples", 60):
        for seed in range(50):
            g = random_automorphism(seed, 1 + seed % 5, F5)
            T = RelatedTriple(g, g, g)
            assert is_related_triple(T)[0]
            r, t = rho(T), theta(T)
            assert is_related_triple(r)[0] and is_related_triple(t)[0]
            assert rho(rho(r)) == T
            assert theta(t) == T


def test_criterion_9_cli_golden_files(capsys):
    with criterion(capsys, 9, "CLI golden files byte-stable; parse-print round trip on 50 lattices", 10):
        for name in ("L1", "L2", "L3"):
            for command in ("classify", "dual", "chain"):
                outputs = []
                for _ in range(2):
                    assert main([command, "--in", str(GOLDEN / f"{name}.json")]) == 0
                    outputs.append(capsys.readouterr().out)
                assert outputs[0] == outputs[1]
                assert outputs[0].encode() == (GOLDEN / f"{command}-{name}.json").read_bytes()
        for n in range(50):
            field = F5 if n % 5 else Q
            L = random_lattice(1 + n % 3, n, n % 4, field)
            text = json.dumps(L.to_json(), indent=2)
            back = Lattice.from_json(json.loads(text))
            assert back == L
            assert json.dumps(back.to_json(), indent=2) == text
