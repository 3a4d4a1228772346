#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cda/algebra.hpp"

using namespace cda;

namespace {

NumberField make_gold_field() {
    std::vector<GaussianInt> poly = {GaussianInt(-1), GaussianInt(-1), GaussianInt(1)};
    FieldElement s0(2), s1(2);
    s0.c[0] = GaussianInt(1);
    s1.c[0] = GaussianInt(1);
    s1.c[1] = GaussianInt(-1);
    const qreal phi = (qreal(1) + qsqrt(qreal(5))) / 2;
    std::vector<qcomplex> emb = {qcomplex(phi), qcomplex(qreal(1) - phi)};
    return NumberField(2, poly, {s0, s1}, emb);
}

CyclicAlgebra make_gold() {
    NumberField F = make_gold_field();
    FieldElement eps(2);
    eps.c[1] = GaussianInt(1); // theta
    UnitData units;
    units.fundamental = {eps};
    units.roots_of_unity = 4;
    return CyclicAlgebra(std::move(F), GaussianInt(0, 1), units);
}

AlgebraElement rnd_elem(const CyclicAlgebra &A, std::mt19937_64 &rng, long reach) {
    long span = 2 * reach + 1;
    std::vector<std::int64_t> v(A.lattice_dim());
    for (auto &x : v) x = std::int64_t(rng() % std::uint64_t(span)) - reach;
    return A.from_coords(v);
}

// exact n x n product of field-entry matrices
std::vector<FieldElement> mat_mul(const NumberField &F, const std::vector<FieldElement> &a,
                                  const std::vector<FieldElement> &b, int n) {
    std::vector<FieldElement> r(std::size_t(n) * n, FieldElement(F.degree()));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                r[std::size_t(i) * n + j] = F.add(
                    r[std::size_t(i) * n + j],
                    F.mul(a[std::size_t(i) * n + k], b[std::size_t(k) * n + j]));
    return r;
}

} // namespace

TEST_CASE("constructor validation") {
    UnitData ok;
    ok.roots_of_unity = 4;
    CHECK_THROWS_AS(CyclicAlgebra(make_gold_field(), GaussianInt(0, 0), ok), config_error);
    UnitData none;
    none.roots_of_unity = 0;
    CHECK_THROWS_AS(CyclicAlgebra(make_gold_field(), GaussianInt(0, 1), none), config_error);
    UnitData bad;
    bad.roots_of_unity = 4;
    FieldElement two(2);
    two.c[0] = GaussianInt(2);
    bad.fundamental = {two};
    CHECK_THROWS_AS(CyclicAlgebra(make_gold_field(), GaussianInt(0, 1), bad), config_error);
}

TEST_CASE("generator relations") {
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    AlgebraElement u = A.u_mul(1, F.one());
    // u^2 = gamma
    CHECK(A.mul(u, u) == A.from_field(F.from_scalar(A.gamma())));
    // theta u = u sigma(theta)
    AlgebraElement th = A.from_field(F.basis_element(1));
    AlgebraElement lhs = A.mul(th, u);
    AlgebraElement rhs = A.mul(u, A.from_field(F.sigma(1, F.basis_element(1))));
    CHECK(lhs == rhs);
}

TEST_CASE("psi is the left regular representation") {
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    const int n = A.degree();
    // column 0 of psi(a) is the coordinate vector of a
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        AlgebraElement a = rnd_elem(A, rng, 3);
        auto m = A.psi(a);
        for (int r = 0; r < n; ++r) CHECK(m[std::size_t(r) * n] == a.part[r]);
    }
    // psi(ab) = psi(a) psi(b), exactly
    for (int t = 0; t < 200; ++t) {
        AlgebraElement a = rnd_elem(A, rng, 3), b = rnd_elem(A, rng, 3);
        auto lhs = A.psi(A.mul(a, b));
        auto rhs = mat_mul(F, A.psi(a), A.psi(b), n);
        CHECK(lhs == rhs);
    }
    // psi(1) = identity
    auto id = A.psi(A.one());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            CHECK(id[std::size_t(r) * n + c] == (r == c ? F.one() : F.zero()));
}

TEST_CASE("reduced norm frozen values") {
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    AlgebraElement u = A.u_mul(1, F.one());
    CHECK(A.reduced_norm(A.one()) == GaussianInt(1, 0));
    CHECK(A.reduced_norm(u) == GaussianInt(0, -1)); // -gamma
    CHECK(A.reduced_norm(A.add(A.one(), u)) == GaussianInt(1, -1));
    CHECK(A.reduced_norm(A.from_field(F.basis_element(1))) == GaussianInt(-1, 0));
    CHECK(A.reduced_norm(A.zero()).is_zero());
    CHECK(A.nrd_norm(u) == 1);
    CHECK(A.nrd_norm(A.add(A.one(), u)) == 2);
    CHECK(A.is_unit(u));
    CHECK(!A.is_unit(A.add(A.one(), u)));
}

TEST_CASE("reduced norm of split elements") {
    // Nrd(x0 + u x1) = N(x0) - gamma N(x1)
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    std::mt19937_64 rng(22);
    for (int t = 0; t < 200; ++t) {
        AlgebraElement a = rnd_elem(A, rng, 4);
        GaussianInt want =
            F.rel_norm(a.part[0]) - A.gamma() * F.rel_norm(a.part[1]);
        CHECK(A.reduced_norm(a) == want);
    }
}

TEST_CASE("reduced norm is multiplicative") {
    CyclicAlgebra A = make_gold();
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        AlgebraElement a = rnd_elem(A, rng, 3), b = rnd_elem(A, rng, 3);
        CHECK(A.reduced_norm(A.mul(a, b)) == A.reduced_norm(a) * A.reduced_norm(b));
    }
}

TEST_CASE("inversion") {
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    std::mt19937_64 rng(24);
    CHECK_THROWS_AS(A.invert(A.zero()), std::invalid_argument);
    for (int t = 0; t < 100; ++t) {
        AlgebraElement a = rnd_elem(A, rng, 3);
        if (a.is_zero()) continue;
        QAlgebraElement inv = A.invert(a);
        AlgebraElement want = A.scal_mul(inv.den, A.one());
        CHECK(A.mul(a, inv.num) == want);
        CHECK(A.mul(inv.num, a) == want);
        CHECK(inv.den == A.reduced_norm(a));
    }
    // inverses of units stay in the order
    AlgebraElement u = A.u_mul(1, F.one());
    QAlgebraElement ui = A.invert(u);
    CHECK(A.is_integral(ui.num, ui.den));
    AlgebraElement v = A.add(A.one(), u); // Nrd = 1 - i, not a unit
    QAlgebraElement vi = A.invert(v);
    CHECK(!A.is_integral(vi.num, vi.den));
}

TEST_CASE("left ideal equality") {
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    AlgebraElement u = A.u_mul(1, F.one());
    AlgebraElement th = A.from_field(F.basis_element(1));
    std::mt19937_64 rng(25);
    for (int t = 0; t < 20; ++t) {
        AlgebraElement x = rnd_elem(A, rng, 2);
        if (x.is_zero()) continue;
        // multiplying by a unit of the order on the left preserves the ideal
        CHECK(A.same_left_ideal(x, A.mul(u, x)));
        CHECK(A.same_left_ideal(x, A.mul(th, x)));
        CHECK(A.same_left_ideal(x, A.scal_mul(GaussianInt(0, 1), x)));
        // a non-unit factor changes it
        CHECK(!A.same_left_ideal(x, A.mul(A.add(A.one(), u), x)));
        CHECK(!A.same_left_ideal(x, A.scal_mul(GaussianInt(2), x)));
    }
    CHECK_THROWS_AS(A.same_left_ideal(A.zero(), A.one()), std::invalid_argument);
}

TEST_CASE("unit coset test") {
    CyclicAlgebra A = make_gold();
    const NumberField &F = A.field();
    AlgebraElement u = A.u_mul(1, F.one());
    AlgebraElement th = A.from_field(F.basis_element(1));
    CHECK(A.same_unit_coset(A.one(), th));
    CHECK(A.same_unit_coset(A.one(), A.scal_mul(GaussianInt(0, 1), A.one())));
    CHECK(!A.same_unit_coset(A.one(), u));
    CHECK(A.same_unit_coset(u, A.mul(u, th)));
    CHECK(!A.same_unit_coset(u, A.mul(u, A.mul(u, th)))); // u u theta = i theta, not in u O_E^*
    CHECK_THROWS_AS(A.same_unit_coset(A.one(), A.add(A.one(), u)), std::invalid_argument);
}

TEST_CASE("coordinate round trip") {
    CyclicAlgebra A = make_gold();
    std::mt19937_64 rng(26);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::int64_t> v(A.lattice_dim());
        for (auto &x : v) x = std::int64_t(rng() % 2001) - 1000;
        AlgebraElement a = A.from_coords(v);
        std::vector<Zint> back = A.coords(a);
        REQUIRE(back.size() == v.size());
        for (std::size_t k = 0; k < v.size(); ++k) CHECK(back[k] == v[k]);
    }
}

TEST_CASE("right multiplication matrix columns") {
    CyclicAlgebra A = make_gold();
    const int dim = A.lattice_dim();
    const int n = A.degree();
    std::mt19937_64 rng(27);
    for (int t = 0; t < 30; ++t) {
        AlgebraElement x = rnd_elem(A, rng, 3);
        std::vector<Zint> m = A.right_mul_matrix(x);
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j) {
                    AlgebraElement g(n, n);
                    g.part[k].c[j] = GaussianInt::i_pow(b);
                    std::vector<Zint> want = A.coords(A.mul(g, x));
                    int col = 2 * (k * n + j) + b;
                    for (int row = 0; row < dim; ++row)
                        CHECK(m[std::size_t(row) * dim + col] == want[row]);
                }
    }
}
