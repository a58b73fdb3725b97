from fractions import Fraction
from itertools import permutations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from avvi.fourier_motzkin import implicit_equalities
from avvi.linalg import Matrix, nullspace

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(bound=6, max_den=4):
    return st.builds(
        Fraction, st.integers(-bound, bound), st.integers(1, max_den)
    )


@st.composite
def skew_matrices(draw, sizes=(2, 4, 6), lo=-5, hi=5):
    n = draw(st.sampled_from(sizes))
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(lo, hi))
            M[i][j], M[j][i] = v, -v
    return Matrix(M)


@st.composite
def rational_matrices(draw, n=None, bound=5):
    n = n or draw(st.integers(1, 4))
    return Matrix([[draw(rationals(bound)) for _ in range(n)] for _ in range(n)])


def leibniz_det(rows):
    """Determinant straight from the permutation expansion (small n only)."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Fraction(sign)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def laplace_det(rows):
    """Cofactor expansion along the first row."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * laplace_det(minor)
    return total


def piece_samples(piece, rng, k=4):
    """Witness plus a few rational points of the piece along its affine hull."""
    pts = [piece.witness]
    if piece.dimension == 0:
        return pts
    sys = piece.xset
    rows = [list(c) for c, _ in sys.equalities] + [list(sys.nonstrict[i][0]) for i in implicit_equalities(sys)]
    n = len(piece.witness)
    basis = nullspace(rows, n) if rows else [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    tries = 0
    while len(pts) < k + 1 and tries < 50 * k:
        tries += 1
        coeffs = [Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in basis]
        x = tuple(w + sum(c * b[i] for c, b in zip(coeffs, basis)) for i, w in enumerate(piece.witness))
        if piece.contains(x):
            pts.append(x)
    return pts


# acceptance criterion -> (passed, seconds, title); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, secs, title = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {title} ({secs:.1f} s)")
