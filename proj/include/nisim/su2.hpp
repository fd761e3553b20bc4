#pragma once

// Path-qubit algebra. Basis ordering is {|I>, |II>}; |I> carries +k_y.
// Rotations follow exp(+i theta sigma / 2).

#include <array>
#include <complex>
#include <span>

namespace nisim {

using Amplitude = std::complex<double>;

class PathState;

/// 2x2 complex matrix acting on the path qubit. Constructed only through the
/// rotation factories, composition, or `from_entries`, so it stays unitary.
class Operator2 {
public:
    /// Identity.
    Operator2();

    /// Row-major entries {m00, m01, m10, m11}. Throws ValidationError unless
    /// unitary to 1e-12.
    static Operator2 from_entries(const std::array<Amplitude, 4>& entries);

    Amplitude operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }
    const std::array<Amplitude, 4>& entries() const { return m_; }

    Operator2 adjoint() const;
    Amplitude determinant() const;
    Operator2 scaled(Amplitude c) const;

    /// max |(U^dagger U - 1)_ij|
    double unitarity_defect() const;

    PathState apply(const PathState& psi) const;

    friend Operator2 operator*(const Operator2& a, const Operator2& b);
    friend bool operator==(const Operator2&, const Operator2&) = default;

private:
    explicit Operator2(const std::array<Amplitude, 4>& m) : m_(m) {}
    std::array<Amplitude, 4> m_;
};

/// Normalized pure state a_I |I> + a_II |II>.
class PathState {
public:
    /// Normalizes the given amplitudes. Throws DomainError on non-finite input
    /// and ValidationError on a zero vector.
    PathState(Amplitude a_I, Amplitude a_II);

    static PathState path_I() { return {1.0, 0.0}; }
    static PathState path_II() { return {0.0, 1.0}; }

    Amplitude amplitude_I() const { return a_I_; }
    Amplitude amplitude_II() const { return a_II_; }
    double norm_squared() const { return std::norm(a_I_) + std::norm(a_II_); }

private:
    friend class Operator2;
    struct Raw {};
    PathState(Raw, Amplitude a, Amplitude b) : a_I_(a), a_II_(b) {}
    Amplitude a_I_;
    Amplitude a_II_;
};

/// Blade splitting angle alpha in [0, pi] and dynamical phase beta.
struct BladeParams {
    double alpha;
    double beta;

    /// Throws DomainError for non-finite values or alpha outside [0, pi].
    void validate() const;
    double transmission() const;  ///< cos(alpha/2)
    double reflection() const;    ///< sin(alpha/2)

    static BladeParams balanced(double beta = 0.0);
};

Operator2 rot_z(double phi);
Operator2 rot_x(double alpha);
Operator2 rot_xy(double phi_r, double alpha);

/// R_z(beta) R_x(alpha) R_z(beta).
Operator2 blade_operator(const BladeParams& p);

/// Product of a time-ordered sequence: the first element acts first, so the
/// result is U_n ... U_2 U_1. Throws UsageError on an empty sequence.
Operator2 compose(std::span<const Operator2> sequence);
Operator2 compose(std::initializer_list<Operator2> sequence);

/// True iff some unit-modulus c gives max|a - c b| < tol. The candidate c is
/// taken from the ratio of the largest-modulus entry of b.
bool equal_up_to_global_phase(const Operator2& a, const Operator2& b, double tol);

}  // namespace nisim
