#include "nisim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <cstdio>
#include <queue>
#include <vector>

#include "nisim/errors.hpp"

namespace nisim {

namespace {

std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980235558, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    std::complex<double> value;
    double error;
};

struct ByError {
    bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

Segment gauss_kronrod(const ComplexIntegrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const std::complex<double> fc = f(center);
    std::complex<double> kronrod = fc * kWgk[10];
    std::complex<double> gauss{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const std::complex<double> sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod.real()) || !std::isfinite(kronrod.imag())) {
        throw NumericalError("integrand is not finite on [" + fmt_g(a) + ", " +
                                 fmt_g(b) + "]",
                             0, INFINITY);
    }
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const ComplexIntegrand& f, double a, double b, const QuadratureOptions& opts,
                           std::span<const double> breakpoints) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integration limits must be finite");
    }
    if (a == b) return {0.0, 0.0, 0, 0};
    const double sign = b > a ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);

    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    std::complex<double> total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = gauss_kronrod(f, cuts[i], cuts[i + 1]);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }
    std::size_t evaluations = 21 * heap.size();
    std::size_t subdivisions = heap.size();

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (total_err > tolerance()) {
        if (subdivisions >= opts.max_subdivisions) {
            throw NumericalError("adaptive quadrature did not converge: error estimate " +
                                     fmt_g(total_err) + " after " + std::to_string(subdivisions) +
                                     " subintervals",
                                 subdivisions, total_err);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericalError("adaptive quadrature hit floating-point resolution near x = " +
                                     fmt_g(mid),
                                 subdivisions, total_err);
        }
        Segment left = gauss_kronrod(f, worst.a, mid);
        Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 42;
        ++subdivisions;
    }

    // Re-sum to shed accumulated cancellation from the running updates.
    total = {};
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    return {sign * total, total_err, subdivisions, evaluations};
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opts) {
    return integrate([&](double x) { return std::complex<double>(f(x), 0.0); }, a, b, opts).value.real();
}

}  // namespace nisim
