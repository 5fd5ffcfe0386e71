#pragma once

#include <complex>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "otto/errors.hpp"

namespace otto {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

// 2x2 density matrix in the energy eigenbasis {|+>, |->}, |+> at index 0.
// `gap` labels the Hamiltonian diag(gap, -gap) the basis belongs to.
class DensityMatrix {
public:
    // Symmetrizes and renormalizes small drift (< 1e-10); throws InputError beyond.
    DensityMatrix(const Mat2& m, double gap);

    static DensityMatrix diagonal(double p_plus, double gap);

    const Mat2& matrix() const { return m_; }
    double gap() const { return gap_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    double excited_population() const { return m_(0, 0).real(); }
    // Bloch components (v_x, v_y, v_z) with rho = (1 + v.sigma)/2.
    Eigen::Vector3d bloch() const;
    // Ascending eigenvalues.
    std::pair<double, double> eigenvalues() const;

private:
    Mat2 m_;
    double gap_;
};

struct PauliChannel {
    double p0 = 1.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;

    PauliChannel() = default;
    PauliChannel(double q0, double q1, double q2, double q3);
    std::vector<Mat2> kraus() const;
};

// Projective measurement channel {pi1, pi2} with polar angle alpha_m and phase chi.
struct MeasurementChannel {
    double alpha_m = 0.0;
    double chi = 0.0;

    MeasurementChannel() = default;
    MeasurementChannel(double alpha, double phase);
    Mat2 pi1() const;
    Mat2 pi2() const;
    std::vector<Mat2> kraus() const { return {pi1(), pi2()}; }
};

class GeneralQubitChannel {
public:
    explicit GeneralQubitChannel(std::vector<Mat2> kraus);

    const std::vector<Mat2>& kraus() const { return k_; }
    // h = sum_j <-|K_j K_j^dag|->, equal to 1 for unital sets.
    double h() const;
    double theta() const;

private:
    std::vector<Mat2> k_;
};

enum class Branch { plus, minus };

struct ControlSpec {
    double alpha = 0.0;
    Branch branch = Branch::plus;

    ControlSpec() = default;
    ControlSpec(double a, Branch b);
    // sqrt(alpha (1 - alpha))
    double coherence() const;
    // p = (1 +- coherence)/2
    double probability() const;
    // +1 for plus, -1 for minus.
    double sign() const { return branch == Branch::plus ? 1.0 : -1.0; }
};

using AnyChannel = std::variant<PauliChannel, MeasurementChannel, GeneralQubitChannel>;

DensityMatrix thermal_state(double beta, double nu);

Mat2 pauli(int i);
Mat2 hamiltonian(double nu);

DensityMatrix apply_kraus(const std::vector<Mat2>& kraus, const DensityMatrix& rho);
DensityMatrix apply_channel(const PauliChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_channel(const MeasurementChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_channel(const GeneralQubitChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_channel(const AnyChannel& ch, const DensityMatrix& rho);

double theta_of(const PauliChannel& ch);
double theta_of(const MeasurementChannel& ch);
double theta_of(const GeneralQubitChannel& ch);
double theta_of(const AnyChannel& ch);

struct SuperposedResult {
    DensityMatrix state;
    double probability;
};

SuperposedResult superpose_apply(const MeasurementChannel& ch, const DensityMatrix& rho,
                                 const ControlSpec& ctrl);

double von_neumann_entropy(const DensityMatrix& rho);

enum class ExchangeKind { none, work_like, heat_like };

const char* to_string(ExchangeKind k);

ExchangeKind classify_exchange(const DensityMatrix& before, const DensityMatrix& after,
                               const Mat2& h);

} // namespace otto
