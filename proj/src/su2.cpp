#include "nisim/su2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nisim/errors.hpp"

namespace nisim {

namespace {

constexpr double kUnitarityTol = 1e-12;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

}  // namespace

Operator2::Operator2() : m_{Amplitude{1.0}, Amplitude{}, Amplitude{}, Amplitude{1.0}} {}

Operator2 Operator2::from_entries(const std::array<Amplitude, 4>& entries) {
    for (const auto& z : entries) {
        require_finite(z.real(), "operator entry");
        require_finite(z.imag(), "operator entry");
    }
    Operator2 op(entries);
    if (op.unitarity_defect() >= kUnitarityTol) {
        throw ValidationError("operator is not unitary");
    }
    return op;
}

Operator2 Operator2::adjoint() const {
    return Operator2({std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])});
}

Amplitude Operator2::determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

Operator2 Operator2::scaled(Amplitude c) const {
    return Operator2({c * m_[0], c * m_[1], c * m_[2], c * m_[3]});
}

double Operator2::unitarity_defect() const {
    const Operator2 p = adjoint() * *this;
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const Amplitude expect = (r == c) ? Amplitude{1.0} : Amplitude{};
            worst = std::max(worst, std::abs(p(r, c) - expect));
        }
    }
    return worst;
}

PathState Operator2::apply(const PathState& psi) const {
    return PathState(PathState::Raw{}, m_[0] * psi.a_I_ + m_[1] * psi.a_II_,
                     m_[2] * psi.a_I_ + m_[3] * psi.a_II_);
}

Operator2 operator*(const Operator2& a, const Operator2& b) {
    const auto& x = a.m_;
    const auto& y = b.m_;
    return Operator2({x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                      x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]});
}

PathState::PathState(Amplitude a_I, Amplitude a_II) {
    for (double v : {a_I.real(), a_I.imag(), a_II.real(), a_II.imag()}) {
        require_finite(v, "path amplitude");
    }
    const double n = std::sqrt(std::norm(a_I) + std::norm(a_II));
    if (n == 0.0) {
        throw ValidationError("path state has zero norm");
    }
    a_I_ = a_I / n;
    a_II_ = a_II / n;
}

void BladeParams::validate() const {
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    if (alpha < 0.0 || alpha > std::numbers::pi) {
        throw DomainError("alpha must lie in [0, pi]");
    }
}

double BladeParams::transmission() const { return std::cos(0.5 * alpha); }
double BladeParams::reflection() const { return std::sin(0.5 * alpha); }

BladeParams BladeParams::balanced(double beta) { return {std::numbers::pi / 2, beta}; }

Operator2 rot_z(double phi) {
    require_finite(phi, "phi");
    const Amplitude e = std::polar(1.0, 0.5 * phi);
    return Operator2::from_entries({e, Amplitude{}, Amplitude{}, std::conj(e)});
}

Operator2 rot_x(double alpha) {
    require_finite(alpha, "alpha");
    const double c = std::cos(0.5 * alpha);
    const double s = std::sin(0.5 * alpha);
    return Operator2::from_entries({Amplitude{c}, Amplitude{0.0, s}, Amplitude{0.0, s}, Amplitude{c}});
}

Operator2 rot_xy(double phi_r, double alpha) {
    require_finite(phi_r, "phi_r");
    require_finite(alpha, "alpha");
    const double c = std::cos(0.5 * alpha);
    const double s = std::sin(0.5 * alpha);
    // i s (cos phi_r sigma_x + sin phi_r sigma_y) off-diagonals
    const double cr = std::cos(phi_r);
    const double sr = std::sin(phi_r);
    return Operator2::from_entries(
        {Amplitude{c}, Amplitude{s * sr, s * cr}, Amplitude{-s * sr, s * cr}, Amplitude{c}});
}

Operator2 blade_operator(const BladeParams& p) {
    p.validate();
    const Operator2 z = rot_z(p.beta);
    return z * rot_x(p.alpha) * z;
}

Operator2 compose(std::span<const Operator2> sequence) {
    if (sequence.empty()) {
        throw UsageError("compose: empty operator sequence");
    }
    Operator2 acc = sequence.front();
    for (std::size_t i = 1; i < sequence.size(); ++i) {
        acc = sequence[i] * acc;
    }
    return acc;
}

Operator2 compose(std::initializer_list<Operator2> sequence) {
    return compose(std::span<const Operator2>(sequence.begin(), sequence.size()));
}

bool equal_up_to_global_phase(const Operator2& a, const Operator2& b, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("tolerance must be positive");
    }
    std::size_t k = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        if (std::abs(b.entries()[i]) > std::abs(b.entries()[k])) k = i;
    }
    const Amplitude bk = b.entries()[k];
    if (std::abs(bk) == 0.0) {
        return false;
    }
    Amplitude c = a.entries()[k] / bk;
    const double mag = std::abs(c);
    c = mag > 0.0 ? c / mag : Amplitude{1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(a.entries()[i] - c * b.entries()[i]) >= tol) return false;
    }
    return true;
}

}  // namespace nisim
