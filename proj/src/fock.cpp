#include "cslprobe/fock.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cslprobe/errors.hpp"

namespace cslprobe {

FockSpace::FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) {
        throw InvalidArgument("FockSpace: cutoff list is empty");
    }
    for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
        if (cutoffs_[i] < 1) {
            throw InvalidArgument("FockSpace: cutoff of mode " + std::to_string(i) +
                                  " is " + std::to_string(cutoffs_[i]) + ", must be >= 1");
        }
        dim_ *= static_cast<std::size_t>(cutoffs_[i] + 1);
    }
}

int FockSpace::cutoff(std::size_t mode) const {
    if (mode >= cutoffs_.size()) {
        throw InvalidArgument("FockSpace: mode " + std::to_string(mode) + " out of range");
    }
    return cutoffs_[mode];
}

std::size_t FockSpace::index(std::span<const int> occupations) const {
    if (occupations.size() != cutoffs_.size()) {
        throw InvalidArgument("FockSpace: occupation tuple has " +
                              std::to_string(occupations.size()) + " entries, expected " +
                              std::to_string(cutoffs_.size()));
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
        const int n = occupations[i];
        if (n < 0 || n > cutoffs_[i]) {
            throw InvalidArgument("FockSpace: occupation " + std::to_string(n) + " of mode " +
                                  std::to_string(i) + " exceeds cutoff " +
                                  std::to_string(cutoffs_[i]));
        }
        idx = idx * static_cast<std::size_t>(cutoffs_[i] + 1) + static_cast<std::size_t>(n);
    }
    return idx;
}

std::vector<int> FockSpace::occupations(std::size_t index) const {
    if (index >= dim_) {
        throw InvalidArgument("FockSpace: basis index out of range");
    }
    std::vector<int> occ(cutoffs_.size());
    for (std::size_t i = cutoffs_.size(); i-- > 0;) {
        const auto d = static_cast<std::size_t>(cutoffs_[i] + 1);
        occ[i] = static_cast<int>(index % d);
        index /= d;
    }
    return occ;
}

FockSpace FockSpace::enlarged(int delta) const {
    auto c = cutoffs_;
    for (auto& x : c) x += delta;
    return FockSpace(std::move(c));
}

FockSpace build_space(std::span<const int> cutoffs) {
    if (cutoffs.empty()) {
        throw InvalidArgument("build_space: cutoff list is empty");
    }
    if (cutoffs.size() != 3) {
        throw InvalidArgument("build_space: expected 3 cutoffs (b, a_p, a_s), got " +
                              std::to_string(cutoffs.size()));
    }
    return FockSpace(std::vector<int>(cutoffs.begin(), cutoffs.end()));
}

// ---------------------------------------------------------------------------

namespace {

void require_same(const FockSpace& a, const FockSpace& b, const char* what) {
    if (!(a == b)) {
        throw SpaceMismatch(std::string(what) + ": operands live on different Fock spaces");
    }
}

}  // namespace

Operator::Operator(FockSpace space, Matrix elements)
    : space_(std::move(space)), elements_(std::move(elements)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (elements_.rows() != d || elements_.cols() != d) {
        throw InvalidArgument("Operator: matrix shape does not match space dimension");
    }
}

Operator Operator::zero(const FockSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    return Operator(space, Matrix::Zero(d, d));
}

Operator Operator::identity(const FockSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    return Operator(space, Matrix::Identity(d, d));
}

Complex Operator::element(std::span<const int> bra, std::span<const int> ket) const {
    return elements_(static_cast<Eigen::Index>(space_.index(bra)),
                     static_cast<Eigen::Index>(space_.index(ket)));
}

Operator Operator::dagger() const { return Operator(space_, elements_.adjoint()); }

Operator operator*(const Operator& lhs, const Operator& rhs) {
    require_same(lhs.space_, rhs.space_, "multiply");
    return Operator(lhs.space_, lhs.elements_ * rhs.elements_);
}

Operator operator+(const Operator& lhs, const Operator& rhs) {
    require_same(lhs.space_, rhs.space_, "add");
    return Operator(lhs.space_, lhs.elements_ + rhs.elements_);
}

Operator operator-(const Operator& lhs, const Operator& rhs) {
    require_same(lhs.space_, rhs.space_, "subtract");
    return Operator(lhs.space_, lhs.elements_ - rhs.elements_);
}

Operator operator*(Complex factor, const Operator& op) {
    return Operator(op.space_, factor * op.elements_);
}

Operator annihilation(const FockSpace& space, std::size_t mode) {
    if (mode >= space.modes()) {
        throw InvalidArgument("annihilation: mode " + std::to_string(mode) + " out of range");
    }
    auto op = Operator::zero(space);
    Matrix m = op.matrix();
    for (std::size_t col = 0; col < space.dim(); ++col) {
        auto occ = space.occupations(col);
        const int n = occ[mode];
        if (n == 0) continue;
        occ[mode] = n - 1;
        m(static_cast<Eigen::Index>(space.index(occ)), static_cast<Eigen::Index>(col)) =
            std::sqrt(static_cast<double>(n));
    }
    return Operator(space, std::move(m));
}

Operator annihilation(const FockSpace& space, Mode mode) {
    return annihilation(space, static_cast<std::size_t>(mode));
}

Operator creation(const FockSpace& space, std::size_t mode) {
    return annihilation(space, mode).dagger();
}

Operator number(const FockSpace& space, std::size_t mode) {
    if (mode >= space.modes()) {
        throw InvalidArgument("number: mode " + std::to_string(mode) + " out of range");
    }
    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            static_cast<double>(space.occupations(i)[mode]);
    }
    return Operator(space, std::move(m));
}

Operator number(const FockSpace& space, Mode mode) {
    return number(space, static_cast<std::size_t>(mode));
}

Operator occupation_projector(const FockSpace& space, std::size_t mode, int n) {
    if (mode >= space.modes()) {
        throw InvalidArgument("occupation_projector: mode out of range");
    }
    if (n < 0 || n > space.cutoff(mode)) {
        throw InvalidArgument("occupation_projector: occupation outside the truncated space");
    }
    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        if (space.occupations(i)[mode] == n) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    return Operator(space, std::move(m));
}

Operator dagger(const Operator& op) { return op.dagger(); }
Operator multiply(const Operator& lhs, const Operator& rhs) { return lhs * rhs; }
Operator add(const Operator& lhs, const Operator& rhs) { return lhs + rhs; }
Operator scale(const Operator& op, Complex factor) { return factor * op; }
Operator commutator(const Operator& lhs, const Operator& rhs) { return lhs * rhs - rhs * lhs; }

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(FockSpace space, Matrix elements)
    : space_(std::move(space)), elements_(std::move(elements)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (elements_.rows() != d || elements_.cols() != d) {
        throw InvalidArgument("DensityMatrix: matrix shape does not match space dimension");
    }
}

double DensityMatrix::hermiticity_defect() const {
    const double norm = elements_.norm();
    if (norm == 0.0) return 0.0;
    return (elements_ - elements_.adjoint()).norm() / norm;
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (elements_ + elements_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::hermitize() {
    elements_ = 0.5 * (elements_ + elements_.adjoint()).eval();
}

void DensityMatrix::check(double hermitian_tol, double positivity_tol) const {
    if (hermiticity_defect() > hermitian_tol) {
        throw InvalidArgument("DensityMatrix: not Hermitian");
    }
    const Complex tr = trace();
    if (std::abs(tr.imag()) > hermitian_tol || tr.real() < -positivity_tol ||
        tr.real() > 1.0 + positivity_tol) {
        throw InvalidArgument("DensityMatrix: trace outside [0, 1]");
    }
    if (min_eigenvalue() < -positivity_tol) {
        throw InvalidArgument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix basis_state(const FockSpace& space, std::span<const int> occupations) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    const auto i = static_cast<Eigen::Index>(space.index(occupations));
    Matrix m = Matrix::Zero(d, d);
    m(i, i) = 1.0;
    return DensityMatrix(space, std::move(m));
}

DensityMatrix basis_state(const FockSpace& space, std::initializer_list<int> occupations) {
    return basis_state(space, std::span<const int>(occupations.begin(), occupations.size()));
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
    require_same(rho.space(), op.space(), "expectation");
    // Tr[rho op] = sum_ij rho_ij op_ji
    return (rho.matrix().transpose().cwiseProduct(op.matrix())).sum();
}

Complex matrix_element(const DensityMatrix& rho, std::span<const int> bra,
                       std::span<const int> ket) {
    return rho.matrix()(static_cast<Eigen::Index>(rho.space().index(bra)),
                        static_cast<Eigen::Index>(rho.space().index(ket)));
}

Complex matrix_element(const DensityMatrix& rho, std::initializer_list<int> bra,
                       std::initializer_list<int> ket) {
    return matrix_element(rho, std::span<const int>(bra.begin(), bra.size()),
                          std::span<const int>(ket.begin(), ket.size()));
}

}  // namespace cslprobe
