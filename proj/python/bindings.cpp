#include "swvar/dependence.hpp"
#include "swvar/experiments.hpp"
#include "swvar/io.hpp"
#include "swvar/pipeline.hpp"
#include "swvar/simulate.hpp"
#include "swvar/solvers.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace swvar;

namespace {

py::dict fit_dict(const FitResult& f) {
    py::dict d;
    d["coeffs"] = f.coeffs;
    d["iters"] = f.iters;
    d["converged"] = f.converged;
    d["lambda_used"] = f.lambda_used;
    d["objective_trace"] = f.objective_trace;
    if (f.low_rank) d["low_rank"] = *f.low_rank;
    if (f.sparse) d["sparse"] = *f.sparse;
    return d;
}

Trajectory as_trajectory(const Matrix& data) {
    Trajectory t;
    t.data = data;
    return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of the swvar package";
    m.attr("__version__") = kSoftwareVersion;

    auto base = py::register_exception<Error>(m, "SwvarError", PyExc_RuntimeError);
    py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());
    py::register_exception<StabilityError>(m, "StabilityError", base.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    m.def("gen_sparse_transition", [](std::size_t p, std::size_t sparsity, double rho, std::uint64_t seed) {
        Rng rng(seed);
        return gen_sparse_transition(TransitionGenSpec{p, sparsity, rho, {}}, rng);
    }, py::arg("p"), py::arg("sparsity"), py::arg("rho") = 0.5, py::arg("seed") = 0);

    m.def("simulate_var", [](const Matrix& coeffs, std::size_t d, std::size_t T, double gamma2, double noise_scale,
                             std::uint64_t seed, std::size_t burn_in) {
        Rng rng(seed);
        const VarModel model = VarModel::from_stacked(coeffs, d);
        SimulationOptions opts;
        opts.burn_in = burn_in;
        return simulate_var(model, NoiseSpec{gamma2, noise_scale, model.dim()}, T, rng, opts).data;
    }, py::arg("coeffs"), py::arg("d") = 1, py::arg("T") = 200, py::arg("gamma2") = 2.0, py::arg("noise_scale") = 1.0,
       py::arg("seed") = 0, py::arg("burn_in") = 500);

    m.def("dependence_report", [](const Matrix& A, const Matrix& sigma, std::size_t grid) {
        const DependenceReport r = dependence_report(A, sigma, grid);
        py::dict d;
        d["c_factor"] = r.c_factor;
        d["rho"] = r.rho;
        d["op_norm"] = r.op_norm;
        d["m_upper"] = r.m_upper;
        d["m_lower"] = r.m_lower;
        d["truncation_terms"] = r.truncation_terms;
        d["tail_bound"] = r.tail_bound;
        return d;
    }, py::arg("A"), py::arg("sigma"), py::arg("grid") = 512);

    m.def("solve_lyapunov", &solve_lyapunov, py::arg("B"), py::arg("sigma_eta"));

    m.def("penalty_value", [](const std::string& spec, const Vector& v) { return penalty_value(penalty_from_json(spec), v); },
          py::arg("penalty_json"), py::arg("v"));
    m.def("penalty_dual", [](const std::string& spec, const Vector& u) { return penalty_dual(penalty_from_json(spec), u); },
          py::arg("penalty_json"), py::arg("u"));
    m.def("penalty_prox", [](const std::string& spec, const Vector& u, double tau) {
        return penalty_prox(penalty_from_json(spec), u, tau);
    }, py::arg("penalty_json"), py::arg("u"), py::arg("tau"));

    m.def("lasso", [](const Matrix& X, const Matrix& Y, double lam, const std::string& penalty) {
        return fit_dict(fista_fit(X, Y, penalty_from_json(penalty), lam));
    }, py::arg("X"), py::arg("Y"), py::arg("lam"), py::arg("penalty_json") = R"({"type":"l1"})");
    m.def("ols", [](const Matrix& X, const Matrix& Y) { return fit_dict(ols_fit(X, Y)); }, py::arg("X"), py::arg("Y"));
    m.def("dantzig", [](const Matrix& X, const Vector& y, double lam) { return fit_dict(dantzig_l1(X, y, lam)); },
          py::arg("X"), py::arg("y"), py::arg("lam"));

    m.def("fit_var", [](const Matrix& data, std::size_t d, const std::string& penalty, std::optional<double> lam) {
        const LambdaRule rule = lam ? LambdaRule::fixed(*lam) : LambdaRule::validation({});
        return fit_dict(fit_var(as_trajectory(data), d, penalty_from_json(penalty), rule));
    }, py::arg("data"), py::arg("d") = 1, py::arg("penalty_json") = R"({"type":"l1"})", py::arg("lam") = py::none());
    m.def("fit_var_lowrank_sparse", [](const Matrix& data, double lambda_nuc, double mu, double alpha) {
        return fit_dict(fit_var_lowrank_sparse(as_trajectory(data), lambda_nuc, mu, alpha));
    }, py::arg("data"), py::arg("lambda_nuc"), py::arg("mu"), py::arg("alpha"));

    m.def("predict", &predict, py::arg("coeffs"), py::arg("d"), py::arg("history"), py::arg("horizon"));
    m.def("eval_errors", [](const Matrix& est, const Matrix& truth, std::size_t d, const Matrix& series) {
        const ErrorMetrics e = eval_errors(est, truth, d, series);
        py::dict out;
        out["frob_err"] = e.frob_err;
        out["rel_err"] = e.rel_err;
        out["pred_err"] = e.pred_err;
        out["max_row_l2"] = e.max_row_l2;
        return out;
    }, py::arg("est"), py::arg("truth"), py::arg("d"), py::arg("series"));

    m.def("run_experiment", [](const std::string& name, const std::string& config_json, unsigned threads,
                               const std::string& format) {
        const ExperimentKind kind = experiment_from_name(name);
        ExperimentConfig cfg = config_from_json(config_json, kind);
        cfg.threads = threads;
        ResultTable table;
        {
            py::gil_scoped_release release;
            switch (kind) {
                case ExperimentKind::FigSW: table = run_figsw(cfg); break;
                case ExperimentKind::LsTables: table = run_ls_tables(cfg); break;
                case ExperimentKind::Concentration: table = concentration_table(run_concentration(cfg), cfg); break;
            }
        }
        return format == "json" ? emit_json(table) : emit_csv(table);
    }, py::arg("name"), py::arg("config_json") = "{}", py::arg("threads") = 1, py::arg("format") = "csv");
}
