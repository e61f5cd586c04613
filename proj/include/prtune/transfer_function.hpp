#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace prtune {

/// One sample of a frequency response. The phase is unwrapped: it is
/// accumulated from per-root angle contributions and the dead-time term,
/// so it tracks continuously below -180 degrees instead of folding.
struct FrequencyPoint {
    double omega = 0.0;      ///< rad/s
    double magnitude = 0.0;  ///< |G(j omega)|
    double phase_deg = 0.0;  ///< unwrapped phase, degrees
};

/// Rational transfer function with dead time,
///     G(s) = num(s)/den(s) * exp(-delay * s),
/// coefficients stored in descending powers of s. Immutable after
/// construction; zeros and poles are extracted once and cached, so all
/// queries are pure and the type is safe to share across threads.
class TransferFunction {
   public:
    TransferFunction(Eigen::VectorXd num, Eigen::VectorXd den, double delay = 0.0);
    TransferFunction(std::initializer_list<double> num, std::initializer_list<double> den,
                     double delay = 0.0);

    static TransferFunction unity();

    const Eigen::VectorXd& num() const { return num_; }
    const Eigen::VectorXd& den() const { return den_; }
    double delay() const { return delay_; }

    int num_degree() const { return static_cast<int>(num_.size()) - 1; }
    int den_degree() const { return static_cast<int>(den_.size()) - 1; }
    int relative_degree() const { return den_degree() - num_degree(); }
    bool is_strictly_proper() const { return num_degree() < den_degree(); }
    bool is_proper() const { return num_degree() <= den_degree(); }

    const std::vector<std::complex<double>>& zeros() const { return zeros_; }
    const std::vector<std::complex<double>>& poles() const { return poles_; }

    /// num(s)/den(s) * exp(-s*delay) at an arbitrary complex point.
    std::complex<double> evaluate(std::complex<double> s) const;

    /// True if den(0) == 0, i.e. the rational part contains an integrator.
    bool has_pole_at_origin() const;

    /// num(0)/den(0); +inf when a pole sits at the origin.
    double dc_gain() const;

   private:
    Eigen::VectorXd num_;
    Eigen::VectorXd den_;
    double delay_;
    std::vector<std::complex<double>> zeros_;
    std::vector<std::complex<double>> poles_;
};

/// Roots of a polynomial given by descending coefficients, via the balanced
/// companion matrix. Empty input or constants have no roots.
std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& coeffs);

/// Series interconnection: numerators and denominators convolve, delays add.
/// No pole-zero cancellation is attempted.
TransferFunction series(const TransferFunction& g1, const TransferFunction& g2);

/// Magnitude from a direct Horner evaluation, phase from the summed zero and
/// pole angle contributions minus omega*delay (unwrapped by construction).
/// Throws std::domain_error at a pole on the imaginary axis.
FrequencyPoint freq_response(const TransferFunction& g, double omega);

/// Controllable canonical realization of the rational part (dead time is the
/// simulator's job). Biproper inputs split into D plus a strictly proper
/// remainder; improper inputs are rejected.
struct StateSpaceRealization {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D = 0.0;

    int order() const { return static_cast<int>(A.rows()); }
};

StateSpaceRealization to_state_space(const TransferFunction& g);

}  // namespace prtune
