#include "swvar/model.hpp"

#include <string>

namespace swvar {

namespace {

void check_square_blocks(const std::vector<Matrix>& blocks, Eigen::Index p, const char* what) {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (blocks[k].rows() != p || blocks[k].cols() != p) {
            throw StructuralError(std::string(what) + " block " + std::to_string(k + 1) + " is " +
                                  std::to_string(blocks[k].rows()) + "x" + std::to_string(blocks[k].cols()) +
                                  ", expected " + std::to_string(p) + "x" + std::to_string(p));
        }
    }
}

}  // namespace

void VarModel::validate() const {
    if (coeffs.empty()) throw StructuralError("VAR model needs at least one lag");
    const auto p = coeffs.front().rows();
    if (p == 0) throw StructuralError("VAR model has zero dimension");
    check_square_blocks(coeffs, p, "coefficient");
}

Matrix VarModel::stacked() const {
    validate();
    const auto p = static_cast<Eigen::Index>(dim());
    Matrix out(p * static_cast<Eigen::Index>(lag()), p);
    for (std::size_t k = 0; k < lag(); ++k) out.middleRows(static_cast<Eigen::Index>(k) * p, p) = coeffs[k];
    return out;
}

VarModel VarModel::from_stacked(const Matrix& stacked, std::size_t d) {
    if (d == 0) throw StructuralError("lag must be >= 1");
    const auto p = stacked.cols();
    if (stacked.rows() != p * static_cast<Eigen::Index>(d)) {
        throw StructuralError("stacked coefficients must be (d*p)x p");
    }
    VarModel m;
    for (std::size_t k = 0; k < d; ++k) m.coeffs.push_back(stacked.middleRows(static_cast<Eigen::Index>(k) * p, p));
    return m;
}

void VarxModel::validate() const {
    base.validate();
    check_square_blocks(exo_coeffs, static_cast<Eigen::Index>(base.dim()), "exogenous coefficient");
}

Matrix VarxModel::stacked() const {
    validate();
    const auto p = static_cast<Eigen::Index>(dim());
    Matrix out(p * static_cast<Eigen::Index>(endo_lag() + exo_lag()), p);
    out.topRows(p * static_cast<Eigen::Index>(endo_lag())) = base.stacked();
    for (std::size_t j = 0; j < exo_lag(); ++j) {
        out.middleRows(p * static_cast<Eigen::Index>(endo_lag() + j), p) = exo_coeffs[j];
    }
    return out;
}

void Trajectory::validate() const {
    if (data.rows() == 0 || data.cols() == 0) throw StructuralError("empty trajectory");
    require_finite(data, "trajectory");
    if (exo) {
        if (exo->rows() != data.rows()) throw StructuralError("exogenous series length differs from trajectory");
        require_finite(*exo, "exogenous series");
    }
}

Matrix build_companion(const VarModel& model) {
    model.validate();
    const auto p = static_cast<Eigen::Index>(model.dim());
    const auto d = static_cast<Eigen::Index>(model.lag());
    Matrix comp = Matrix::Zero(d * p, d * p);
    for (Eigen::Index k = 0; k < d; ++k) comp.block(0, k * p, p, p) = model.coeffs[static_cast<std::size_t>(k)].transpose();
    for (Eigen::Index k = 1; k < d; ++k) comp.block(k * p, (k - 1) * p, p, p).setIdentity();
    return comp;
}

Matrix build_varx_companion(const VarxModel& model) {
    model.validate();
    const auto p = static_cast<Eigen::Index>(model.dim());
    const auto da = static_cast<Eigen::Index>(model.endo_lag());
    const auto db = static_cast<Eigen::Index>(model.exo_lag());
    const auto size = p * (da + db);
    Matrix comp = Matrix::Zero(size, size);
    for (Eigen::Index i = 0; i < da; ++i) comp.block(0, i * p, p, p) = model.base.coeffs[static_cast<std::size_t>(i)].transpose();
    for (Eigen::Index j = 0; j < db; ++j) {
        comp.block(0, (da + j) * p, p, p) = model.exo_coeffs[static_cast<std::size_t>(j)].transpose();
    }
    for (Eigen::Index i = 1; i < da; ++i) comp.block(i * p, (i - 1) * p, p, p).setIdentity();
    // z_t has no dynamics; only the lagged copies z_{t-1}.. are shifted in.
    for (Eigen::Index j = 1; j < db; ++j) comp.block((da + j) * p, (da + j - 1) * p, p, p).setIdentity();
    return comp;
}

RegressionData build_design(const Trajectory& traj, std::size_t d) {
    traj.validate();
    if (d == 0) throw StructuralError("lag must be >= 1");
    const std::size_t T = traj.length();
    if (T < d) {
        throw InsufficientDataError("trajectory has T=" + std::to_string(T) + " < d=" + std::to_string(d));
    }
    const auto p = static_cast<Eigen::Index>(traj.dim());
    const auto n = static_cast<Eigen::Index>(T - d + 1);
    const auto lags = static_cast<Eigen::Index>(d);
    RegressionData out{Matrix(n, lags * p), Matrix(n, p)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index t = i + lags;  // response time
        out.Y.row(i) = traj.data.row(t);
        for (Eigen::Index k = 0; k < lags; ++k) out.X.block(i, k * p, 1, p) = traj.data.row(t - 1 - k);
    }
    return out;
}

RegressionData build_varx_design(const Trajectory& traj, std::size_t d_a, std::size_t d_b) {
    traj.validate();
    if (d_a == 0) throw StructuralError("endogenous lag must be >= 1");
    if (d_b > 0 && !traj.exo) throw StructuralError("VAR-X design requires exogenous data");
    const std::size_t t0 = std::max(d_a, d_b);
    const std::size_t T = traj.length();
    if (T < t0) throw InsufficientDataError("trajectory too short for the requested lags");
    const auto p = static_cast<Eigen::Index>(traj.dim());
    const auto q = d_b > 0 ? traj.exo->cols() : Eigen::Index{0};
    const auto n = static_cast<Eigen::Index>(T - t0 + 1);
    const auto da = static_cast<Eigen::Index>(d_a);
    const auto db = static_cast<Eigen::Index>(d_b);
    RegressionData out{Matrix(n, da * p + db * q), Matrix(n, p)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index t = i + static_cast<Eigen::Index>(t0);
        out.Y.row(i) = traj.data.row(t);
        for (Eigen::Index k = 0; k < da; ++k) out.X.block(i, k * p, 1, p) = traj.data.row(t - 1 - k);
        for (Eigen::Index j = 0; j < db; ++j) out.X.block(i, da * p + j * q, 1, q) = traj.exo->row(t - 1 - j);
    }
    return out;
}

}  // namespace swvar
