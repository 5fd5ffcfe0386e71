#include "otto/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace otto {

namespace {

constexpr double kDriftTol = 1e-10;
constexpr double kEigTol = 1e-12;
constexpr double kProbTol = 1e-12;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + " must be finite");
}

} // namespace

DensityMatrix::DensityMatrix(const Mat2& m, double gap) : m_(m), gap_(gap) {
    if (!m.allFinite()) throw InputError("density matrix has non-finite entries");
    require_finite(gap, "gap");
    double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kDriftTol) throw InputError("density matrix is not Hermitian");
    m_ = 0.5 * (m + m.adjoint());
    double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kDriftTol) throw InputError("density matrix trace differs from 1");
    m_ /= tr;
    auto [lo, hi] = eigenvalues();
    if (lo < -kEigTol || hi > 1.0 + kEigTol)
        throw InputError("density matrix eigenvalues outside [0, 1]");
}

DensityMatrix DensityMatrix::diagonal(double p_plus, double gap) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = p_plus;
    m(1, 1) = 1.0 - p_plus;
    return DensityMatrix(m, gap);
}

Eigen::Vector3d DensityMatrix::bloch() const {
    return {2.0 * m_(0, 1).real(), -2.0 * m_(0, 1).imag(), (m_(0, 0) - m_(1, 1)).real()};
}

std::pair<double, double> DensityMatrix::eigenvalues() const {
    double r = bloch().norm();
    return {0.5 * (1.0 - r), 0.5 * (1.0 + r)};
}

PauliChannel::PauliChannel(double q0, double q1, double q2, double q3)
    : p0(q0), p1(q1), p2(q2), p3(q3) {
    for (double p : {q0, q1, q2, q3}) {
        require_finite(p, "Pauli weight");
        if (p < 0.0) throw InputError("Pauli weights must be non-negative");
    }
    if (std::abs(q0 + q1 + q2 + q3 - 1.0) > kProbTol)
        throw InputError("Pauli weights must sum to 1");
}

std::vector<Mat2> PauliChannel::kraus() const {
    const double p[4] = {p0, p1, p2, p3};
    std::vector<Mat2> out;
    for (int i = 0; i < 4; ++i) out.push_back(std::sqrt(p[i]) * pauli(i));
    return out;
}

MeasurementChannel::MeasurementChannel(double alpha, double phase) : alpha_m(alpha), chi(phase) {
    require_finite(alpha, "alpha_m");
    require_finite(phase, "chi");
}

Mat2 MeasurementChannel::pi1() const {
    Eigen::Vector2cd v(std::sin(alpha_m / 2) * std::exp(cplx(0.0, -chi)), -std::cos(alpha_m / 2));
    return v * v.adjoint();
}

Mat2 MeasurementChannel::pi2() const {
    Eigen::Vector2cd v(std::cos(alpha_m / 2), std::sin(alpha_m / 2) * std::exp(cplx(0.0, chi)));
    return v * v.adjoint();
}

GeneralQubitChannel::GeneralQubitChannel(std::vector<Mat2> kraus) : k_(std::move(kraus)) {
    if (k_.empty()) throw InputError("channel needs at least one Kraus operator");
    Mat2 s = Mat2::Zero();
    for (const auto& k : k_) {
        if (!k.allFinite()) throw InputError("Kraus operator has non-finite entries");
        s += k.adjoint() * k;
    }
    if ((s - Mat2::Identity()).cwiseAbs().maxCoeff() > kProbTol)
        throw InputError("Kraus operators violate completeness");
}

double GeneralQubitChannel::h() const {
    double s = 0.0;
    for (const auto& k : k_) s += (k * k.adjoint())(1, 1).real();
    return s;
}

double GeneralQubitChannel::theta() const {
    double s = 0.0;
    for (const auto& k : k_) s += std::norm(k(1, 0));
    return s;
}

ControlSpec::ControlSpec(double a, Branch b) : alpha(a), branch(b) {
    require_finite(a, "control alpha");
    if (a < 0.0 || a > 1.0) throw InputError("control alpha must lie in [0, 1]");
}

double ControlSpec::coherence() const { return std::sqrt(alpha * (1.0 - alpha)); }

double ControlSpec::probability() const { return 0.5 * (1.0 + sign() * coherence()); }

DensityMatrix thermal_state(double beta, double nu) {
    require_finite(beta, "beta");
    require_finite(nu, "nu");
    if (nu <= 0.0) throw InputError("nu must be positive");
    // e^{-beta nu}/Z written through tanh so that |beta nu| -> inf stays finite.
    return DensityMatrix::diagonal(0.5 * (1.0 - std::tanh(beta * nu)), nu);
}

Mat2 pauli(int i) {
    const cplx I(0.0, 1.0);
    Mat2 m;
    switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw InputError("Pauli index out of range");
    }
    return m;
}

Mat2 hamiltonian(double nu) {
    Mat2 h = Mat2::Zero();
    h(0, 0) = nu;
    h(1, 1) = -nu;
    return h;
}

DensityMatrix apply_kraus(const std::vector<Mat2>& kraus, const DensityMatrix& rho) {
    Mat2 out = Mat2::Zero();
    for (const auto& k : kraus) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix(out, rho.gap());
}

DensityMatrix apply_channel(const PauliChannel& ch, const DensityMatrix& rho) {
    return apply_kraus(ch.kraus(), rho);
}

DensityMatrix apply_channel(const MeasurementChannel& ch, const DensityMatrix& rho) {
    return apply_kraus(ch.kraus(), rho);
}

DensityMatrix apply_channel(const GeneralQubitChannel& ch, const DensityMatrix& rho) {
    return apply_kraus(ch.kraus(), rho);
}

DensityMatrix apply_channel(const AnyChannel& ch, const DensityMatrix& rho) {
    return std::visit([&](const auto& c) { return apply_channel(c, rho); }, ch);
}

double theta_of(const PauliChannel& ch) { return ch.p1 + ch.p2; }

double theta_of(const MeasurementChannel& ch) {
    // p = |<-|psi1>|^2, theta = 2 p (1 - p) = sin^2(alpha)/2
    double p = ch.pi1()(1, 1).real();
    return 2.0 * p * (1.0 - p);
}

double theta_of(const GeneralQubitChannel& ch) { return ch.theta(); }

double theta_of(const AnyChannel& ch) {
    return std::visit([](const auto& c) { return theta_of(c); }, ch);
}

SuperposedResult superpose_apply(const MeasurementChannel& ch, const DensityMatrix& rho,
                                 const ControlSpec& ctrl) {
    const auto k = ch.kraus();
    const Mat2& r = rho.matrix();
    Mat2 diag = Mat2::Zero();
    Mat2 cross = Mat2::Zero();
    for (const auto& ki : k) {
        diag += ki * r * ki.adjoint();
        for (const auto& kj : k) cross += ki * r * kj.adjoint();
    }
    // N = 2 for a pair of projectors
    const double s = ctrl.sign() * ctrl.coherence();
    Mat2 unnorm = 0.5 * diag + 0.5 * s * cross;
    double p = unnorm.trace().real();
    if (std::abs(p - ctrl.probability()) > 1e-12)
        throw PhysicsError("branch probability disagrees with (1 +- sqrt(a(1-a)))/2");
    Mat2 out = unnorm / p;
    out = 0.5 * (out + out.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat2> es(out);
    if (es.eigenvalues()(0) < -1e-10)
        throw PhysicsError("superposed state has a negative eigenvalue");
    if (es.eigenvalues()(0) < 0.0) {
        // floating-point dust only; clip through the spectral decomposition
        Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
        ev /= ev.sum();
        out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }
    return {DensityMatrix(out, rho.gap()), p};
}

double von_neumann_entropy(const DensityMatrix& rho) {
    auto [lo, hi] = rho.eigenvalues();
    double s = 0.0;
    for (double l : {lo, hi})
        if (l > 0.0) s -= l * std::log(l);
    return s;
}

const char* to_string(ExchangeKind k) {
    switch (k) {
    case ExchangeKind::none: return "none";
    case ExchangeKind::work_like: return "work-like";
    case ExchangeKind::heat_like: return "heat-like";
    }
    return "?";
}

ExchangeKind classify_exchange(const DensityMatrix& before, const DensityMatrix& after,
                               const Mat2& h) {
    if (before.gap() != after.gap()) throw InputError("states belong to different bases");
    double de = ((after.matrix() - before.matrix()) * h).trace().real();
    if (std::abs(de) < 1e-12) return ExchangeKind::none;
    double ds = von_neumann_entropy(after) - von_neumann_entropy(before);
    return std::abs(ds) < 1e-10 ? ExchangeKind::work_like : ExchangeKind::heat_like;
}

} // namespace otto
