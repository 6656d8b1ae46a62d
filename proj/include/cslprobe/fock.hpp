#pragma once

// Truncated multimode Fock-space algebra with dense complex storage.
//
// Basis ordering is lexicographic in the occupation tuple with mode 0
// slowest: index(n_0, n_1, n_2) = (n_0 * d_1 + n_1) * d_2 + n_2, where
// d_i = cutoff_i + 1. For the optomechanical system the modes are
// (b, a_p, a_s), so |n_b n_p n_s> maps to index (n_b*d_p + n_p)*d_s + n_s.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cslprobe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Mode indices of the three-mode optomechanical system.
enum class Mode : std::size_t { Phonon = 0, Probe = 1, Signal = 2 };

class FockSpace {
public:
    /// Throws InvalidArgument on an empty list or any cutoff < 1.
    explicit FockSpace(std::vector<int> cutoffs);

    std::size_t modes() const noexcept { return cutoffs_.size(); }
    int cutoff(std::size_t mode) const;
    const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
    std::size_t dim() const noexcept { return dim_; }

    /// Flat basis index of an occupation tuple.
    std::size_t index(std::span<const int> occupations) const;
    /// Inverse of index().
    std::vector<int> occupations(std::size_t index) const;

    /// Same space with every cutoff increased by `delta`.
    FockSpace enlarged(int delta = 1) const;

    friend bool operator==(const FockSpace&, const FockSpace&) = default;

private:
    std::vector<int> cutoffs_;
    std::size_t dim_ = 1;
};

/// Three-mode space in the (b, a_p, a_s) order.
FockSpace build_space(std::span<const int> cutoffs);

class Operator {
public:
    Operator(FockSpace space, Matrix elements);

    static Operator zero(const FockSpace& space);
    static Operator identity(const FockSpace& space);

    const FockSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return elements_; }
    Complex operator()(std::size_t row, std::size_t col) const { return elements_(row, col); }
    /// <bra|O|ket> for occupation tuples.
    Complex element(std::span<const int> bra, std::span<const int> ket) const;

    Operator dagger() const;

    friend Operator operator*(const Operator& lhs, const Operator& rhs);
    friend Operator operator+(const Operator& lhs, const Operator& rhs);
    friend Operator operator-(const Operator& lhs, const Operator& rhs);
    friend Operator operator*(Complex scale, const Operator& op);

private:
    FockSpace space_;
    Matrix elements_;
};

Operator annihilation(const FockSpace& space, std::size_t mode);
Operator annihilation(const FockSpace& space, Mode mode);
Operator creation(const FockSpace& space, std::size_t mode);
Operator number(const FockSpace& space, std::size_t mode);
Operator number(const FockSpace& space, Mode mode);
/// Projector onto the subspace where `mode` holds exactly `n` quanta.
Operator occupation_projector(const FockSpace& space, std::size_t mode, int n);

Operator dagger(const Operator& op);
Operator multiply(const Operator& lhs, const Operator& rhs);
Operator add(const Operator& lhs, const Operator& rhs);
Operator scale(const Operator& op, Complex factor);
Operator commutator(const Operator& lhs, const Operator& rhs);

class DensityMatrix {
public:
    /// Takes ownership without validation; call check() to enforce invariants.
    DensityMatrix(FockSpace space, Matrix elements);

    const FockSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return elements_; }
    Matrix& matrix() noexcept { return elements_; }

    Complex trace() const { return elements_.trace(); }
    /// ||rho - rho^dagger|| / ||rho||.
    double hermiticity_defect() const;
    double min_eigenvalue() const;
    void hermitize();

    /// Throws InvalidArgument when Hermiticity, trace or positivity invariants fail.
    void check(double hermitian_tol = 1e-12, double positivity_tol = 1e-9) const;

private:
    FockSpace space_;
    Matrix elements_;
};

/// Pure projector |occ><occ|.
DensityMatrix basis_state(const FockSpace& space, std::span<const int> occupations);
DensityMatrix basis_state(const FockSpace& space, std::initializer_list<int> occupations);

/// Tr[rho * op].
Complex expectation(const DensityMatrix& rho, const Operator& op);
/// <bra|rho|ket>.
Complex matrix_element(const DensityMatrix& rho, std::span<const int> bra, std::span<const int> ket);
Complex matrix_element(const DensityMatrix& rho, std::initializer_list<int> bra,
                       std::initializer_list<int> ket);

}  // namespace cslprobe
