#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nisim/errors.hpp"
#include "nisim/special.hpp"
#include "nisim/vibration.hpp"

using namespace nisim;
using std::numbers::pi;

namespace {

// Independent evaluation of the default kinematics from the raw constants.
struct Reference {
    double m = 1.67492749804e-27, hbar = 1.054571817e-34, h = 6.62607015e-34;
    double lambda = 4.4e-10, d = 3.1356e-10, L = 0.05;
    double v = h / (m * lambda);
    double theta = std::asin(lambda / (2 * d));
    double vpar = v * std::sin(theta);
    double vperp = v * std::cos(theta);
    double tau = L / vperp;
};

const PhysicalParams P = PhysicalParams::defaults();
constexpr double kY0 = 1e-7, kTh0 = 1e-7;

double amplitude_over_phi(const std::function<double(double)>& f) {
    double m = 0.0;
    for (int i = 0; i < 720; ++i) m = std::max(m, std::abs(f(2 * pi * i / 720)));
    return m;
}

// Least squares of y = c2 x^2 + c3 x^3 + c4 x^4 via 3x3 normal equations (Cramer).
std::array<double, 3> fit_234(const std::vector<double>& x, const std::vector<double>& y) {
    double A[3][3] = {}, b[3] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f[3] = {x[i] * x[i], x[i] * x[i] * x[i], x[i] * x[i] * x[i] * x[i]};
        for (int r = 0; r < 3; ++r) {
            b[r] += f[r] * y[i];
            for (int c = 0; c < 3; ++c) A[r][c] += f[r] * f[c];
        }
    }
    auto det = [](double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    const double D = det(A);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        double M[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) M[r][c] = c == k ? b[r] : A[r][c];
        out[k] = det(M) / D;
    }
    return out;
}

}  // namespace

TEST_CASE("default physical parameters") {
    Reference ref;
    CHECK(P.speed() == doctest::Approx(ref.v).epsilon(1e-14));
    CHECK(P.bragg_angle() == doctest::Approx(ref.theta).epsilon(1e-5));
    CHECK(P.tau() == doctest::Approx(ref.tau).epsilon(1e-5));
    CHECK(P.tau() == doctest::Approx(7.8045e-5).epsilon(1e-4));
    CHECK(P.bragg_angle() * 180 / pi == doctest::Approx(44.56).epsilon(1e-3));
    CHECK(P.v_parallel() == doctest::Approx(ref.vpar).epsilon(1e-5));
    CHECK(P.v_perp() == doctest::Approx(ref.vperp).epsilon(1e-5));
}

TEST_CASE("physical parameter validation") {
    CHECK_THROWS_AS(PhysicalParams(4.4e-10, 1.92016e-10, 0.05), ValidationError);
    CHECK_THROWS_AS(PhysicalParams(4.4e-10, 3.1356e-10, 0.0), ValidationError);
    CHECK_THROWS_AS(PhysicalParams(-1.0, 3.1356e-10, 0.05), ValidationError);
    PhysicalParams longer(4.4e-10, 3.1356e-10, 0.10);
    CHECK(longer.tau() == doctest::Approx(2 * P.tau()).epsilon(1e-14));
}

TEST_CASE("noise kinematics") {
    NoiseSpec s{NoiseAxis::Y, kY0, 0.0, 1.0};
    auto k = noise_kinematics(s, 0.3);
    CHECK(k.first == 0.0);
    CHECK(k.second == 0.0);
    CHECK(k.third == 0.0);

    s = {NoiseAxis::Y, kY0, 50.0, pi / 2};
    k = noise_kinematics(s, 0.0);
    CHECK(std::abs(k.first) < 1e-20);
    CHECK(k.second == doctest::Approx(-kY0 * 2500.0).epsilon(1e-15));

    CHECK_THROWS_AS(noise_kinematics({NoiseAxis::Y, kY0, 1.0, 2 * pi}, 0.0), ValidationError);
    CHECK_THROWS_AS(noise_kinematics({NoiseAxis::Y, -1.0, 1.0, 0.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(noise_kinematics({NoiseAxis::Z, 1.0, -1.0, 0.0}, 0.0), ValidationError);
}

TEST_CASE("noise kinematics against central differences") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> t(0.0, 0.1), ph(0.0, 2 * pi);
    for (NoiseAxis axis : {NoiseAxis::Y, NoiseAxis::Z}) {
        for (int i = 0; i < 10; ++i) {
            NoiseSpec s{axis, 1.0, 120.0, ph(rng)};
            const double t0 = t(rng);
            const double h = 1e-6;
            auto x = [&](double tt) { return std::sin(s.omega * tt + s.varphi); };
            auto d1 = [&](double tt) { return noise_kinematics(s, tt).first; };
            auto d2 = [&](double tt) { return noise_kinematics(s, tt).second; };
            const auto k = noise_kinematics(s, t0);
            const double fd1 = (x(t0 + h) - x(t0 - h)) / (2 * h);
            const double fd2 = (d1(t0 + h) - d1(t0 - h)) / (2 * h);
            const double fd3 = (d2(t0 + h) - d2(t0 - h)) / (2 * h);
            CHECK(std::abs(fd1 - k.first) <= 1e-8 * s.omega);
            CHECK(std::abs(fd2 - k.second) <= 1e-8 * s.omega * s.omega);
            CHECK(std::abs(fd3 - k.third) <= 1e-8 * s.omega * s.omega * s.omega);
        }
    }
}

TEST_CASE("exact loop phases: structure") {
    for (GeometryKind kind : kAllGeometries) {
        for (NoiseAxis axis : {NoiseAxis::Y, NoiseAxis::Z}) {
            auto p = loop_phases_exact(kind, {axis, 0.0, 300.0, 1.2}, P);
            CHECK(p.total_sym == 0.0);
            if (p.total_anti) CHECK(*p.total_anti == 0.0);
        }
    }
    auto three = loop_phases_exact(GeometryKind::ThreeBlade, {NoiseAxis::Y, kY0, 80.0, 0.4}, P);
    CHECK_FALSE(three.dPhi1.has_value());
    CHECK_FALSE(three.total_anti.has_value());

    for (NoiseAxis axis : {NoiseAxis::Y, NoiseAxis::Z}) {
        NoiseSpec s{axis, axis == NoiseAxis::Y ? kY0 : kTh0, 170.0, 2.1};
        auto four = loop_phases_exact(GeometryKind::FourBlade, s, P);
        auto five = loop_phases_exact(GeometryKind::FiveBlade, s, P);
        CHECK(four.total_sym == *four.dPhi1 + *four.dPhi2);
        CHECK(five.total_sym == four.total_sym);
        CHECK(*five.total_anti == *five.dPhi1 + *five.dPhi2_anti);
        CHECK_FALSE(four.total_anti.has_value());
    }
}

TEST_CASE("exact loop phases: combined y-noise totals") {
    Reference ref;
    const double mh = ref.m / ref.hbar, tau = ref.tau;
    NoiseSpec s{NoiseAxis::Y, kY0, 140.0, 0.9};
    const double u = kY0 * s.omega * std::cos(s.varphi);
    const double du = -kY0 * s.omega * s.omega * std::sin(s.varphi);
    const double ddu = -kY0 * std::pow(s.omega, 3) * std::cos(s.varphi);
    auto four = loop_phases_exact(GeometryKind::FourBlade, s, P);
    CHECK(four.total_sym == doctest::Approx(24 * mh * std::pow(tau, 3) * (ref.vpar - u) * ddu).epsilon(1e-4));
    auto five = loop_phases_exact(GeometryKind::FiveBlade, s, P);
    CHECK(*five.total_anti ==
          doctest::Approx(-16 * mh * tau * tau * (ref.vpar - u) * (du + tau * ddu)).epsilon(1e-4));
    auto three = loop_phases_exact(GeometryKind::ThreeBlade, s, P);
    CHECK(three.total_sym == doctest::Approx(32 * mh * tau * tau * (ref.vpar - u) * du).epsilon(1e-4));
}

TEST_CASE("low-frequency prefactors") {
    Reference ref;
    const double mh = ref.m / ref.hbar, tau = ref.tau;
    auto pre = [&](GeometryKind k, NoiseAxis a, Branch b) {
        return std::abs(lowfreq_law(k, a, b, P, a == NoiseAxis::Y ? kY0 : kTh0).prefactor);
    };
    CHECK(pre(GeometryKind::ThreeBlade, NoiseAxis::Y, Branch::Symmetric) ==
          doctest::Approx(32 * mh * ref.vpar * kY0 * tau * tau).epsilon(1e-4));
    CHECK(pre(GeometryKind::ThreeBlade, NoiseAxis::Y, Branch::Symmetric) == doctest::Approx(1.95287e-4).epsilon(1e-4));
    CHECK(pre(GeometryKind::FourBlade, NoiseAxis::Y, Branch::Symmetric) == doctest::Approx(1.14309e-8).epsilon(1e-4));
    CHECK(pre(GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Antisymmetric) ==
          doctest::Approx(9.7643e-5).epsilon(1e-4));
    CHECK(pre(GeometryKind::ThreeBlade, NoiseAxis::Z, Branch::Symmetric) ==
          doctest::Approx(32 * mh * ref.vperp * ref.vpar * kTh0 * tau * tau).epsilon(1e-4));
    CHECK(pre(GeometryKind::ThreeBlade, NoiseAxis::Z, Branch::Symmetric) == doctest::Approx(0.125111).epsilon(1e-4));
    CHECK(pre(GeometryKind::FourBlade, NoiseAxis::Z, Branch::Symmetric) == doctest::Approx(1.46465e-5).epsilon(1e-4));
    CHECK(pre(GeometryKind::FiveBlade, NoiseAxis::Z, Branch::Antisymmetric) ==
          doctest::Approx(0.0625556).epsilon(1e-4));
    CHECK(pre(GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Symmetric) ==
          pre(GeometryKind::FourBlade, NoiseAxis::Y, Branch::Symmetric));
    CHECK_THROWS_AS(lowfreq_law(GeometryKind::FourBlade, NoiseAxis::Y, Branch::Antisymmetric, P, kY0), UsageError);
}

TEST_CASE("low-frequency examples") {
    auto lf = loop_phase_lowfreq(GeometryKind::ThreeBlade, {NoiseAxis::Y, kY0, 100.0, pi / 2}, P);
    CHECK(std::abs(lf.total_sym) == doctest::Approx(1.95287).epsilon(1e-4));
    lf = loop_phase_lowfreq(GeometryKind::FiveBlade, {NoiseAxis::Z, kTh0, 4.4, pi / 2}, P);
    REQUIRE(lf.total_anti.has_value());
    CHECK(std::abs(*lf.total_anti) == doctest::Approx(0.0625556 * 4.4).epsilon(1e-4));
    CHECK(std::abs(*lf.total_anti) == doctest::Approx(0.275).epsilon(2e-3));
}

TEST_CASE("property: low-frequency laws match exact phases in magnitude") {
    struct Case { GeometryKind k; NoiseAxis a; Branch b; };
    const Case cases[] = {
        {GeometryKind::ThreeBlade, NoiseAxis::Y, Branch::Symmetric},
        {GeometryKind::FourBlade, NoiseAxis::Y, Branch::Symmetric},
        {GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Antisymmetric},
        {GeometryKind::ThreeBlade, NoiseAxis::Z, Branch::Symmetric},
        {GeometryKind::FourBlade, NoiseAxis::Z, Branch::Symmetric},
        {GeometryKind::FiveBlade, NoiseAxis::Z, Branch::Antisymmetric},
        {GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Symmetric},
    };
    for (const auto& c : cases) {
        const double amp = c.a == NoiseAxis::Y ? kY0 : kTh0;
        for (double wt : {1e-2, 1e-3, 1e-4}) {
            const double omega = wt / P.tau();
            auto exact = loop_phase_function(c.k, c.a, c.b, omega, amp, P, PhaseModel::Exact);
            auto lf = loop_phase_function(c.k, c.a, c.b, omega, amp, P, PhaseModel::LowFrequency);
            const double ae = amplitude_over_phi(exact), al = amplitude_over_phi(lf);
            CHECK(std::abs(ae - al) / ae < (wt == 1e-2 ? 1e-2 : wt));
        }
    }
}

TEST_CASE("property: the omega^2 term cancels in the symmetric y-noise loop") {
    std::vector<double> x, sym, anti;
    for (int i = 1; i <= 40; ++i) {
        const double wt = 1e-3 * i / 40;
        NoiseSpec s{NoiseAxis::Y, kY0, wt / P.tau(), 0.6};
        auto p = loop_phases_exact(GeometryKind::FiveBlade, s, P);
        x.push_back(wt);
        sym.push_back(p.total_sym);
        anti.push_back(*p.total_anti);
    }
    const auto cs = fit_234(x, sym);
    const double xm = 1e-3;
    CHECK(std::abs(cs[0] * xm * xm) < 1e-6 * std::abs(cs[1] * xm * xm * xm));
    // the antisymmetric loop keeps a leading omega^2 term
    const auto ca = fit_234(x, anti);
    CHECK(std::abs(ca[0] * xm * xm) > 10 * std::abs(ca[1] * xm * xm * xm));
}

TEST_CASE("closed-form coherence examples") {
    for (GeometryKind k : kAllGeometries) {
        for (NoiseAxis a : {NoiseAxis::Y, NoiseAxis::Z}) {
            auto c = coherence_closed_form(k, a, 0.0, P, 1e-7);
            CHECK(c.symmetric.gamma == Amplitude(1.0));
            CHECK(c.antisymmetric.has_value() == (k == GeometryKind::FiveBlade));
        }
    }
    auto five = coherence_closed_form(GeometryKind::FiveBlade, NoiseAxis::Y, 100.0, P, kY0);
    CHECK(1.0 - five.antisymmetric->gamma.real() == doctest::Approx(0.2245).epsilon(2e-3));
    // first zero of the three-blade y coherence
    const double w0 = std::sqrt(2.404825557695773 / 1.95287e-4);
    CHECK(w0 == doctest::Approx(110.97).epsilon(1e-3));
    auto three = coherence_closed_form(GeometryKind::ThreeBlade, NoiseAxis::Y, w0, P, kY0);
    CHECK(std::abs(three.symmetric.gamma) < 1e-3);
    CHECK_THROWS_AS(coherence_closed_form(GeometryKind::ThreeBlade, NoiseAxis::Y, -1.0, P, kY0), ValidationError);
}

TEST_CASE("quadrature coherence examples") {
    auto c = coherence_quadrature([](double) { return 0.8; });
    CHECK(std::abs(c.gamma - std::polar(1.0, 0.8)) < 1e-12);
    for (double K : {0.3, 1.0, 2.404825557695773, 4.0}) {
        auto s = coherence_quadrature([K](double p) { return K * std::sin(p); });
        auto co = coherence_quadrature([K](double p) { return K * std::cos(p); });
        CHECK(std::abs(s.gamma - bessel_j0(K)) < 1e-9);
        CHECK(std::abs(co.gamma - bessel_j0(K)) < 1e-9);
    }
    CHECK_THROWS_AS(coherence_quadrature([](double) { return 0.0; }, 0.0), ValidationError);
}

TEST_CASE("property: closed form equals quadrature up to the first zero") {
    struct Case { GeometryKind k; NoiseAxis a; Branch b; };
    const Case cases[] = {
        {GeometryKind::ThreeBlade, NoiseAxis::Y, Branch::Symmetric},
        {GeometryKind::FourBlade, NoiseAxis::Y, Branch::Symmetric},
        {GeometryKind::FiveBlade, NoiseAxis::Y, Branch::Antisymmetric},
        {GeometryKind::ThreeBlade, NoiseAxis::Z, Branch::Symmetric},
        {GeometryKind::FourBlade, NoiseAxis::Z, Branch::Symmetric},
        {GeometryKind::FiveBlade, NoiseAxis::Z, Branch::Antisymmetric},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        const double amp = c.a == NoiseAxis::Y ? kY0 : kTh0;
        const auto law = lowfreq_law(c.k, c.a, c.b, P, amp);
        const double wmax = std::pow(2.404825557695773 / std::abs(law.prefactor), 1.0 / law.power);
        for (int i = 0; i <= 40; ++i) {
            const double w = wmax * i / 40;
            auto cf = coherence_closed_form(c.k, c.a, w, P, amp);
            const auto& ref = c.b == Branch::Symmetric ? cf.symmetric : *cf.antisymmetric;
            auto q = coherence_quadrature(loop_phase_function(c.k, c.a, c.b, w, amp, P));
            worst = std::max(worst, std::abs(ref.gamma - q.gamma));
            CHECK(std::abs(q.gamma) <= 1 + 1e-9);
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("Monte Carlo coherence") {
    auto zero = coherence_montecarlo([](double) { return 0.0; }, 5000, 3);
    CHECK(zero.gamma == Amplitude(1.0));
    CHECK(zero.std_error == 0.0);
    CHECK(zero.samples == 5000);

    auto f = [](double p) { return 2.404825557695773 * std::sin(p); };
    auto a = coherence_montecarlo(f, 1000000, 99);
    CHECK(std::abs(a.gamma) < 3 * a.std_error);
    CHECK(a.std_error > 0.0);
    CHECK(a.std_error == std::hypot(a.std_error_re, a.std_error_im));

    auto b = coherence_montecarlo(f, 1000000, 99);
    auto c = coherence_montecarlo(f, 1000000, 99, Exec::Serial);
    CHECK(a.gamma == b.gamma);
    CHECK(a.gamma == c.gamma);
    CHECK(a.std_error == c.std_error);
    auto d = coherence_montecarlo(f, 1000000, 100);
    CHECK(a.gamma != d.gamma);

    CHECK_THROWS_AS(coherence_montecarlo(f, 999, 1), ValidationError);
}

TEST_CASE("property: Monte Carlo agrees with quadrature") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> pick(0, 2), ax(0, 1);
    std::uniform_real_distribution<double> frac(0.0, 1.5);
    int within = 0;
    for (int i = 0; i < 100; ++i) {
        const GeometryKind k = kAllGeometries[pick(rng)];
        const NoiseAxis a = ax(rng) ? NoiseAxis::Z : NoiseAxis::Y;
        const Branch b = k == GeometryKind::FiveBlade && ax(rng) ? Branch::Antisymmetric : Branch::Symmetric;
        const double amp = a == NoiseAxis::Y ? kY0 : kTh0;
        const auto law = lowfreq_law(k, a, b, P, amp);
        const double w = std::pow(frac(rng) * 3.0 / std::abs(law.prefactor), 1.0 / law.power);
        const auto phase = loop_phase_function(k, a, b, w, amp, P, PhaseModel::Exact);
        auto q = coherence_quadrature(phase);
        auto mc = coherence_montecarlo(phase, 100000, 1000 + i);
        CHECK(std::abs(mc.gamma) <= 1 + 1e-9);
        if (std::abs(mc.gamma - q.gamma) < 3 * mc.std_error) ++within;
    }
    CHECK(within == 100);
}

TEST_CASE("exact phase function wraps the arrival phase") {
    auto f = loop_phase_function(GeometryKind::FourBlade, NoiseAxis::Z, Branch::Symmetric, 300.0, kTh0, P,
                                 PhaseModel::Exact);
    CHECK(f(2 * pi + 0.5) == doctest::Approx(f(0.5)).epsilon(1e-12));
    CHECK(f(-0.5) == doctest::Approx(f(2 * pi - 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(loop_phase_function(GeometryKind::ThreeBlade, NoiseAxis::Y, Branch::Antisymmetric, 1.0, kY0, P,
                                        PhaseModel::Exact),
                    UsageError);
}
