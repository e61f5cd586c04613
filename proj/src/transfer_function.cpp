#include "prtune/transfer_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace prtune {

namespace {

Eigen::VectorXd trim_leading_zeros(const Eigen::VectorXd& c) {
    int first = 0;
    while (first < c.size() - 1 && c[first] == 0.0) ++first;
    return c.tail(c.size() - first);
}

std::complex<double> poly_eval(const Eigen::VectorXd& c, std::complex<double> s) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < c.size(); ++i) acc = acc * s + c[i];
    return acc;
}

// Parlett-Reinsch diagonal balancing (radix 2), applied before the Schur
// iteration; companion matrices of polynomials whose coefficients span many
// orders of magnitude lose eigenvalue accuracy without it.
void balance_in_place(Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double col = a.col(i).lpNorm<1>() - std::abs(a(i, i));
            double row = a.row(i).lpNorm<1>() - std::abs(a(i, i));
            if (col == 0.0 || row == 0.0) continue;
            const double total = col + row;
            double factor = 1.0;
            while (col < row / 2.0) {
                col *= 2.0;
                row /= 2.0;
                factor *= 2.0;
            }
            while (col >= row * 2.0) {
                col /= 2.0;
                row *= 2.0;
                factor /= 2.0;
            }
            if (col + row < 0.95 * total) {
                done = false;
                a.row(i) /= factor;
                a.col(i) *= factor;
            }
        }
    }
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd c = trim_leading_zeros(coeffs);
    // deflate trailing zero coefficients as explicit roots at the origin
    int zeros_at_origin = 0;
    while (c.size() > 1 && c[c.size() - 1] == 0.0) {
        c = c.head(c.size() - 1).eval();
        ++zeros_at_origin;
    }
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<std::complex<double>> roots(zeros_at_origin, 0.0);
    if (n < 1) return roots;
    if (c[0] == 0.0) throw std::invalid_argument("polynomial_roots: zero polynomial");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    companion.row(0) = -(c.tail(n) / c[0]).transpose();
    companion.block(1, 0, n - 1, n - 1).diagonal().setOnes();
    balance_in_place(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("polynomial_roots: eigensolver failed");
    for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i]);
    return roots;
}

TransferFunction::TransferFunction(Eigen::VectorXd num, Eigen::VectorXd den, double delay)
    : num_(trim_leading_zeros(num)), den_(trim_leading_zeros(den)), delay_(delay) {
    if (den_.size() == 0 || (den_.size() == 1 && den_[0] == 0.0))
        throw std::invalid_argument("TransferFunction: denominator is identically zero");
    if (num_.size() == 0) num_ = Eigen::VectorXd::Zero(1);
    if (!(delay_ >= 0.0)) throw std::invalid_argument("TransferFunction: delay must be >= 0");
    if (!num_.allFinite() || !den_.allFinite())
        throw std::invalid_argument("TransferFunction: non-finite coefficient");
    if (num_degree() > 0 || num_[0] != 0.0) zeros_ = polynomial_roots(num_);
    poles_ = polynomial_roots(den_);
}

TransferFunction::TransferFunction(std::initializer_list<double> num,
                                   std::initializer_list<double> den, double delay)
    : TransferFunction(Eigen::Map<const Eigen::VectorXd>(num.begin(), num.size()),
                       Eigen::Map<const Eigen::VectorXd>(den.begin(), den.size()), delay) {}

TransferFunction TransferFunction::unity() { return TransferFunction({1.0}, {1.0}); }

std::complex<double> TransferFunction::evaluate(std::complex<double> s) const {
    return poly_eval(num_, s) / poly_eval(den_, s) * std::exp(-s * delay_);
}

bool TransferFunction::has_pole_at_origin() const { return den_[den_.size() - 1] == 0.0; }

double TransferFunction::dc_gain() const {
    if (has_pole_at_origin()) return std::numeric_limits<double>::infinity();
    return num_[num_.size() - 1] / den_[den_.size() - 1];
}

TransferFunction series(const TransferFunction& g1, const TransferFunction& g2) {
    const auto conv = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
        for (int i = 0; i < a.size(); ++i)
            for (int j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    return TransferFunction(conv(g1.num(), g2.num()), conv(g1.den(), g2.den()),
                            g1.delay() + g2.delay());
}

FrequencyPoint freq_response(const TransferFunction& g, double omega) {
    if (!(omega >= 0.0)) throw std::invalid_argument("freq_response: omega must be >= 0");
    const std::complex<double> s(0.0, omega);

    const std::complex<double> den_value = poly_eval(g.den(), s);
    if (den_value == std::complex<double>(0.0, 0.0))
        throw std::domain_error("freq_response: singular frequency (pole on the imaginary axis)");
    for (const auto& p : g.poles()) {
        if (std::abs(p.real()) <= 1e-12 * std::max(1.0, std::abs(p)) &&
            std::abs(omega - p.imag()) <= 1e-12 * std::max(1.0, std::abs(p)))
            throw std::domain_error(
                "freq_response: singular frequency (pole on the imaginary axis)");
    }

    const double magnitude = std::abs(poly_eval(g.num(), s) / den_value);

    // Unwrapped phase: sum of angles from each zero, minus each pole, minus the
    // dead-time ramp. atan2 folding of the evaluated complex number would lose
    // everything below -180 degrees.
    double phase = 0.0;
    for (const auto& z : g.zeros()) phase += std::atan2(omega - z.imag(), -z.real());
    for (const auto& p : g.poles()) phase -= std::atan2(omega - p.imag(), -p.real());
    const double gain = g.num()[0] / g.den()[0];
    if (gain < 0.0) phase += std::numbers::pi;
    phase -= omega * g.delay();

    return FrequencyPoint{omega, magnitude, phase * 180.0 / std::numbers::pi};
}

StateSpaceRealization to_state_space(const TransferFunction& g) {
    if (!g.is_proper())
        throw std::invalid_argument("to_state_space: improper transfer function");

    Eigen::VectorXd den = g.den() / g.den()[0];
    Eigen::VectorXd num = g.num() / g.den()[0];

    StateSpaceRealization ss;
    if (num.size() == den.size()) {  // biproper: split off the direct term
        ss.D = num[0];
        num = (num - ss.D * den).tail(den.size() - 1).eval();
    }

    const int n = static_cast<int>(den.size()) - 1;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.A.row(0) = -den.tail(n).transpose();
    ss.A.block(1, 0, n - 1, n - 1).diagonal().setOnes();
    ss.B = Eigen::VectorXd::Zero(n);
    ss.B[0] = 1.0;
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.C.tail(num.size()) = num.transpose();
    return ss;
}

}  // namespace prtune
