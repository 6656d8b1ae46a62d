#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <vector>

#include "cslprobe/errors.hpp"
#include "cslprobe/fock.hpp"
#include "cslprobe/lindblad.hpp"

using namespace cslprobe;

namespace {

Complex elem(const Operator& op, std::vector<int> bra, std::vector<int> ket) {
    return op.element(bra, ket);
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("dimension and index round trip") {
    FockSpace s({2, 3, 1});
    CHECK(s.dim() == 3 * 4 * 2);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const auto occ = s.occupations(i);
        CHECK(s.index(occ) == i);
    }
    std::vector<int> occ{1, 2, 1};
    CHECK(s.index(occ) == (1 * 4 + 2) * 2 + 1);
    CHECK(s.enlarged(1) == FockSpace({3, 4, 2}));
}

TEST_CASE("invalid spaces and tuples") {
    CHECK_THROWS_AS(FockSpace({}), InvalidArgument);
    CHECK_THROWS_AS(FockSpace({2, 0, 2}), InvalidArgument);
    FockSpace s({2, 2, 2});
    std::vector<int> too_big{3, 0, 0};
    std::vector<int> wrong_len{1, 0};
    CHECK_THROWS_AS(s.index(too_big), InvalidArgument);
    CHECK_THROWS_AS(s.index(wrong_len), InvalidArgument);
    std::vector<int> two{2, 2};
    CHECK_THROWS(build_space(two));
}

TEST_CASE("ladder operator matrix elements") {
    FockSpace s({3, 2, 2});
    const auto b = annihilation(s, Mode::Phonon);
    const auto bd = creation(s, 0);
    for (int n = 1; n <= 3; ++n) {
        CHECK(elem(b, {n - 1, 1, 0}, {n, 1, 0}).real() == approx(std::sqrt(double(n))));
        CHECK(elem(bd, {n, 0, 2}, {n - 1, 0, 2}).real() == approx(std::sqrt(double(n))));
    }
    CHECK(std::abs(elem(b, {0, 1, 0}, {2, 1, 0})) == 0.0);
    CHECK((bd.matrix() - b.matrix().adjoint()).norm() == 0.0);

    const auto n = number(s, Mode::Phonon);
    CHECK((n.matrix() - (bd * b).matrix()).norm() < 1e-14);
    CHECK(elem(n, {3, 0, 0}, {3, 0, 0}).real() == approx(3.0));
}

TEST_CASE("canonical commutator holds below the truncation edge") {
    FockSpace s({4, 1, 1});
    const auto a = annihilation(s, 0);
    const auto c = commutator(a, dagger(a));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const int n = s.occupations(i)[0];
        const double expected = n < 4 ? 1.0 : -4.0;
        CHECK(c(i, i).real() == approx(expected));
    }
}

TEST_CASE("projectors partition the identity") {
    FockSpace s({2, 2, 2});
    Operator sum = Operator::zero(s);
    for (int n = 0; n <= 2; ++n) sum = sum + occupation_projector(s, 0, n);
    CHECK((sum.matrix() - Operator::identity(s).matrix()).norm() == 0.0);
    CHECK_THROWS_AS(occupation_projector(s, 0, 3), InvalidArgument);
}

TEST_CASE("operators on different spaces do not combine") {
    FockSpace s1({2, 2, 2});
    FockSpace s2({3, 2, 2});
    CHECK_THROWS_AS(annihilation(s1, 0) * annihilation(s2, 0), SpaceMismatch);
    CHECK_THROWS_AS(annihilation(s1, 0) + annihilation(s2, 0), SpaceMismatch);
}

TEST_CASE("density matrix invariants") {
    FockSpace s({2, 2, 2});
    auto rho = basis_state(s, {1, 1, 0});
    CHECK(rho.trace().real() == 1.0);
    CHECK_NOTHROW(rho.check());
    CHECK(rho.min_eigenvalue() == approx(0.0));
    CHECK(expectation(rho, number(s, Mode::Probe)).real() == 1.0);
    CHECK(matrix_element(rho, {1, 1, 0}, {1, 1, 0}).real() == 1.0);

    Matrix m = rho.matrix();
    m(0, 1) = Complex(0.0, 0.1);
    DensityMatrix skew(s, m);
    CHECK(skew.hermiticity_defect() > 0.0);
    CHECK_THROWS_AS(skew.check(), InvalidArgument);
    skew.hermitize();
    CHECK(skew.hermiticity_defect() == 0.0);

    Matrix neg = Matrix::Zero(s.dim(), s.dim());
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(s, neg).check(), InvalidArgument);
}

TEST_CASE("Hamiltonian matrix elements") {
    FockSpace s({2, 2, 2});
    SystemParams p;
    p.g0 = 1.7;
    p.omega = 10.0;
    p.rwa = true;
    const auto h = hamiltonian_at(p, s, 0.0);
    CHECK(elem(h, {0, 0, 1}, {1, 1, 0}).real() == approx(1.7));
    CHECK(elem(h, {2, 1, 0}, {1, 0, 1}).real() == approx(std::sqrt(2.0) * 1.7));
    CHECK((h.matrix() - h.matrix().adjoint()).norm() < 1e-15);

    p.rwa = false;
    const auto full = hamiltonian_at(p, s, 0.0);
    const auto b = annihilation(s, Mode::Phonon);
    const auto ap = annihilation(s, Mode::Probe);
    const auto as = annihilation(s, Mode::Signal);
    const auto cr = Complex(1.7) * (dagger(b) * ap * dagger(as) + b * dagger(ap) * as);
    CHECK((full.matrix() - h.matrix() - cr.matrix()).norm() < 1e-14);

    // At t = pi / (2 Omega) the counter-rotating phase e^{-2i Omega t} is -1.
    const double t = std::acos(-1.0) / (2.0 * p.omega);
    const auto flipped = hamiltonian_at(p, s, t);
    CHECK((flipped.matrix() - h.matrix() + cr.matrix()).norm() < 1e-13);

    p.omega = 0.0;
    CHECK_THROWS_AS(hamiltonian_at(p, s, 0.0), InvalidArgument);
}

}  // TEST_SUITE
