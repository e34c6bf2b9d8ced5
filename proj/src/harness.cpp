#include "tavi/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tavi/integrators_so3.hpp"
#include "tavi/integrators_vector.hpp"

namespace tavi {

using nlohmann::json;

void RunConfig::validate() const {
    params.validate();
    const bool is_wahba = problem.kind == ProblemKind::Wahba;
    const bool is_llgvi = method.kind == MethodKind::Llgvi;
    if (is_wahba != is_llgvi)
        throw ConfigError(is_wahba ? "problem 'wahba' requires method 'llgvi'"
                                   : "method 'llgvi' requires problem 'wahba'");
    if (problem.kind == ProblemKind::Quartic && problem.dim < 1)
        throw ConfigError("problem.dim must be >= 1");
    const bool direct = params.p_ring == params.p;
    if ((method.mode == StepMode::Direct) != direct)
        throw ConfigError(direct ? "mode 'adaptive' requires p_ring < p"
                                 : "mode 'direct' requires p_ring == p");
    if (!(delta > 0.0))
        throw ConfigError("delta must be > 0");
    if (max_iters < 1)
        throw ConfigError("max_iters must be >= 1");
    if (trace_stride < 1)
        throw ConfigError("trace_stride must be >= 1");
}

bool check_termination(double f_k, double f_km1, double f_star, double delta) {
    return std::abs(f_k - f_star) < delta && std::abs(f_k - f_km1) < delta;
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            known = known || item.key() == key;
        if (!known)
            throw ConfigError(where + ": unknown field '" + item.key() + "'");
    }
}

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ConfigError(where + ": missing required field '" + key + "'");
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(doc,
                        {"problem", "method", "params", "max_iters", "delta", "trace_stride",
                         "output_path"},
                        "config");

    RunConfig cfg;

    if (!doc.contains("problem") || !doc["problem"].is_object())
        throw ConfigError("config: missing object field 'problem'");
    const json& prob = doc["problem"];
    reject_unknown_keys(prob, {"kind", "dim", "seed", "matrix_file", "q0", "r0"}, "problem");
    const std::string pkind = prob.value("kind", "");
    if (pkind == "quartic")
        cfg.problem.kind = ProblemKind::Quartic;
    else if (pkind == "wahba")
        cfg.problem.kind = ProblemKind::Wahba;
    else
        throw ConfigError("problem.kind: expected 'quartic' or 'wahba'");
    if (cfg.problem.kind == ProblemKind::Quartic) {
        if (prob.contains("seed") || prob.contains("matrix_file") || prob.contains("r0"))
            throw ConfigError("problem: 'seed'/'matrix_file'/'r0' apply to wahba only");
        cfg.problem.dim = static_cast<int>(number_or(prob, "dim", 1.0, "problem"));
        if (prob.contains("q0")) {
            if (!prob["q0"].is_array())
                throw ConfigError("problem.q0: expected an array of numbers");
            std::vector<double> q0;
            for (const json& v : prob["q0"]) {
                if (!v.is_number())
                    throw ConfigError("problem.q0: expected an array of numbers");
                q0.push_back(v.get<double>());
            }
            if (static_cast<int>(q0.size()) != cfg.problem.dim)
                throw ConfigError("problem.q0: length must equal problem.dim");
            cfg.problem.q0 = std::move(q0);
        }
    } else {
        if (prob.contains("dim") || prob.contains("q0"))
            throw ConfigError("problem: 'dim'/'q0' apply to quartic only");
        cfg.problem.seed = static_cast<std::uint64_t>(number_or(prob, "seed", 0.0, "problem"));
        if (prob.contains("matrix_file"))
            cfg.problem.matrix_file = prob["matrix_file"].get<std::string>();
        if (prob.contains("r0")) {
            const json& r0 = prob["r0"];
            if (!r0.is_array() || r0.size() != 3)
                throw ConfigError("problem.r0: expected 3 rows of 3 numbers");
            Mat3 m;
            for (int r = 0; r < 3; ++r) {
                if (!r0[static_cast<std::size_t>(r)].is_array() ||
                    r0[static_cast<std::size_t>(r)].size() != 3)
                    throw ConfigError("problem.r0: expected 3 rows of 3 numbers");
                for (int c = 0; c < 3; ++c)
                    m(r, c) = r0[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]
                                  .get<double>();
            }
            try {
                (void)Rotation::from_matrix(m);
            } catch (const NotRotationError& e) {
                throw ConfigError(std::string("problem.r0: ") + e.what());
            }
            cfg.problem.r0 = m;
        }
    }

    if (!doc.contains("method") || !doc["method"].is_object())
        throw ConfigError("config: missing object field 'method'");
    const json& meth = doc["method"];
    reject_unknown_keys(meth, {"kind", "mode"}, "method");
    const std::string mkind = meth.value("kind", "");
    if (mkind == "ltvi")
        cfg.method.kind = MethodKind::Ltvi;
    else if (mkind == "htvi")
        cfg.method.kind = MethodKind::Htvi;
    else if (mkind == "llgvi")
        cfg.method.kind = MethodKind::Llgvi;
    else
        throw ConfigError("method.kind: expected 'ltvi', 'htvi' or 'llgvi'");

    if (!doc.contains("params") || !doc["params"].is_object())
        throw ConfigError("config: missing object field 'params'");
    const json& par = doc["params"];
    reject_unknown_keys(par, {"p", "p_ring", "c", "h", "t0"}, "params");
    cfg.params.p = require_number(par, "p", "params");
    cfg.params.h = require_number(par, "h", "params");
    cfg.params.c = number_or(par, "c", 1.0, "params");
    cfg.params.t0 = number_or(par, "t0", 1.0, "params");
    cfg.params.p_ring = number_or(par, "p_ring", cfg.params.p, "params");
    if (cfg.params.p_ring > cfg.params.p)
        throw ConfigError("params.p_ring must not exceed params.p");

    const std::string mode = meth.value("mode", "");
    if (mode == "direct")
        cfg.method.mode = StepMode::Direct;
    else if (mode == "adaptive")
        cfg.method.mode = StepMode::Adaptive;
    else if (mode.empty())
        cfg.method.mode =
            cfg.params.p_ring == cfg.params.p ? StepMode::Direct : StepMode::Adaptive;
    else
        throw ConfigError("method.mode: expected 'direct' or 'adaptive'");

    cfg.max_iters = static_cast<long>(number_or(doc, "max_iters", 100000.0, "config"));
    cfg.delta = number_or(doc, "delta", 1e-9, "config");
    cfg.trace_stride = static_cast<long>(number_or(doc, "trace_stride", 1.0, "config"));
    if (doc.contains("output_path"))
        cfg.output_path = doc["output_path"].get<std::string>();

    cfg.validate();
    return cfg;
}

json parse_json_or_throw(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
}

} // namespace

RunConfig parse_config(const std::string& text) { return config_from_json(parse_json_or_throw(text)); }

std::vector<RunConfig> parse_compare_config(const std::string& text) {
    const json doc = parse_json_or_throw(text);
    if (!doc.is_object() || !doc.contains("runs") || !doc["runs"].is_array())
        throw ConfigError("compare config: expected {\"runs\": [...]}");
    reject_unknown_keys(doc, {"runs"}, "compare config");
    std::vector<RunConfig> cfgs;
    for (const json& item : doc["runs"])
        cfgs.push_back(config_from_json(item));
    if (cfgs.size() < 2)
        throw ConfigError("compare config: need at least 2 runs");
    return cfgs;
}

Mat3 read_wahba_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open matrix file '" + path + "'");
    Mat3 a;
    std::string line;
    for (int r = 0; r < 3; ++r) {
        if (!std::getline(in, line))
            throw IoError("matrix file '" + path + "': expected 3 lines");
        std::istringstream ls(line);
        std::string cell;
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(ls, cell, ','))
                throw IoError("matrix file '" + path + "': expected 3 values per line");
            try {
                a(r, c) = std::stod(cell);
            } catch (const std::exception&) {
                throw IoError("matrix file '" + path + "': bad number '" + cell + "'");
            }
        }
    }
    if (!a.finite())
        throw IoError("matrix file '" + path + "': non-finite entries");
    return a;
}

Mat3 wahba_matrix_for(const ProblemConfig& problem) {
    if (problem.matrix_file)
        return read_wahba_matrix(*problem.matrix_file);
    return random_wahba_matrix(problem.seed);
}

namespace {

std::string method_label(const RunConfig& cfg) {
    std::string label = cfg.method.kind == MethodKind::Ltvi   ? "ltvi"
                        : cfg.method.kind == MethodKind::Htvi ? "htvi"
                                                              : "llgvi";
    label += cfg.method.mode == StepMode::Direct ? "-direct" : "-adaptive";
    return label;
}

template <typename State, typename StepFn, typename EvalFn, typename RecordFn>
RunResult drive(State state, const RunConfig& cfg, StepFn step, EvalFn eval, RecordFn record) {
    const auto t_begin = std::chrono::steady_clock::now();
    RunResult result;

    record(result.trace, state);
    double f_prev = eval(state);
    result.final_f_err = std::abs(f_prev - 0.0);
    result.iterations = 0;

    long last_recorded = 0;
    for (long k = 1; k <= cfg.max_iters; ++k) {
        try {
            state = step(state);
        } catch (const StepTooLargeError& e) {
            throw StepTooLargeError(std::string(e.what()) + " (iteration " + std::to_string(k) +
                                    ")");
        } catch (const NonFiniteError& e) {
            throw NonFiniteError(std::string(e.what()) + " (iteration " + std::to_string(k) +
                                 ")");
        }
        const double f_k = eval(state);
        if (k % cfg.trace_stride == 0) {
            record(result.trace, state);
            last_recorded = k;
        }
        result.iterations = k;
        if (check_termination(f_k, f_prev, 0.0, cfg.delta)) {
            result.converged = true;
            if (last_recorded != k)
                record(result.trace, state);
            result.final_f_err = std::abs(f_k);
            break;
        }
        f_prev = f_k;
        result.final_f_err = std::abs(f_k);
        if (k == cfg.max_iters && last_recorded != k)
            record(result.trace, state);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return result;
}

} // namespace

RunResult run_trajectory(const RunConfig& cfg) {
    cfg.validate();
    const bool direct = cfg.method.mode == StepMode::Direct;

    if (cfg.problem.kind == ProblemKind::Quartic) {
        const Objective obj = make_quartic_objective(cfg.problem.dim);
        const double f_star = 0.0;
        const VectorStepper stepper =
            select_vector_stepper(cfg.method.kind == MethodKind::Ltvi, direct);

        auto record = [&](Trace& trace, const VectorState& s) {
            TraceRow row;
            row.iter = s.k;
            row.tau = static_cast<double>(s.k) * cfg.params.h;
            row.t = s.qt;
            row.f_err = std::abs(obj.eval(s.q) - f_star);
            double g2 = 0.0;
            for (double e : obj.grad(s.q))
                g2 += e * e;
            row.grad_norm = std::sqrt(g2);
            row.step_physical = cfg.params.h * monitor_g(s.qt, cfg.params);
            trace.rows.push_back(row);
        };
        auto eval = [&](const VectorState& s) { return obj.eval(s.q) - f_star; };
        auto step = [&](const VectorState& s) { return stepper(s, obj, cfg.params); };

        VectorState init = vector_init(
            cfg.problem.q0 ? *cfg.problem.q0
                           : std::vector<double>(static_cast<std::size_t>(cfg.problem.dim), 0.0),
            cfg.params);
        RunResult result = drive(std::move(init), cfg, step, eval, record);
        result.trace.so3 = false;
        if (!cfg.output_path.empty())
            write_trace(result.trace, cfg.output_path, TraceFormat::Csv);
        return result;
    }

    const Mat3 a = wahba_matrix_for(cfg.problem);
    const So3Objective obj = make_wahba_objective(a);
    const double f_star = *obj.f_star;

    auto record = [&](Trace& trace, const So3State& s) {
        TraceRow row;
        row.iter = s.k;
        row.tau = static_cast<double>(s.k) * cfg.params.h;
        row.t = s.qt;
        row.f_err = std::abs(obj.eval(s.R) - f_star);
        row.grad_norm = obj.grad_left(s.R).norm();
        row.step_physical = cfg.params.h * monitor_g(s.qt, cfg.params);
        row.orth_err = orthogonality_error(s.R.matrix());
        trace.rows.push_back(row);
    };
    auto eval = [&](const So3State& s) { return obj.eval(s.R) - f_star; };
    auto step = [&](const So3State& s) { return llgvi_adaptive_step(s, obj, cfg.params); };

    const Rotation r0 =
        cfg.problem.r0 ? Rotation::from_matrix(*cfg.problem.r0) : Rotation::identity();
    RunResult result = drive(llgvi_init(r0, cfg.params), cfg, step, eval, record);
    result.trace.so3 = true;
    if (!cfg.output_path.empty())
        write_trace(result.trace, cfg.output_path, TraceFormat::Csv);
    return result;
}

ComparisonReport compare_runs(const std::vector<RunConfig>& cfgs) {
    if (cfgs.size() < 2)
        throw MismatchedProblemError("compare_runs: need at least 2 configurations");
    const RunConfig& first = cfgs.front();
    for (const RunConfig& cfg : cfgs) {
        if (cfg.problem.kind != first.problem.kind)
            throw MismatchedProblemError("compare_runs: problem kinds differ");
        if (cfg.problem.kind == ProblemKind::Quartic) {
            if (cfg.problem.dim != first.problem.dim)
                throw MismatchedProblemError("compare_runs: quartic dimensions differ");
        } else if (cfg.problem.seed != first.problem.seed ||
                   cfg.problem.matrix_file != first.problem.matrix_file) {
            throw MismatchedProblemError("compare_runs: wahba data matrices differ");
        }
    }

    ComparisonReport report;
    for (const RunConfig& cfg : cfgs) {
        const RunResult r = run_trajectory(cfg);
        report.summaries.push_back(
            {method_label(cfg), r.converged, r.iterations, r.final_f_err, r.wall_seconds});
        report.traces.push_back(r.trace);
    }
    return report;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string format_trace(const Trace& trace, TraceFormat format) {
    if (format == TraceFormat::Csv) {
        std::string out = "iter,tau,t,f_err,grad_norm,step_physical,orth_err\n";
        for (const TraceRow& row : trace.rows) {
            out += std::to_string(row.iter);
            out += ',';
            out += format_double(row.tau);
            out += ',';
            out += format_double(row.t);
            out += ',';
            out += format_double(row.f_err);
            out += ',';
            out += format_double(row.grad_norm);
            out += ',';
            out += format_double(row.step_physical);
            out += ',';
            if (row.orth_err)
                out += format_double(*row.orth_err);
            out += '\n';
        }
        return out;
    }

    json doc;
    doc["columns"] = {"iter", "tau", "t", "f_err", "grad_norm", "step_physical", "orth_err"};
    json rows = json::array();
    for (const TraceRow& row : trace.rows) {
        json r = json::array();
        r.push_back(row.iter);
        r.push_back(row.tau);
        r.push_back(row.t);
        r.push_back(row.f_err);
        r.push_back(row.grad_norm);
        r.push_back(row.step_physical);
        if (row.orth_err)
            r.push_back(*row.orth_err);
        else
            r.push_back(nullptr);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_trace(const Trace& trace, const std::string& path, TraceFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << format_trace(trace, format);
    if (!out)
        throw IoError("failed writing trace to '" + path + "'");
}

Trace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open trace '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "iter,tau,t,f_err,grad_norm,step_physical,orth_err")
        throw IoError("trace '" + path + "': bad header");
    Trace trace;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string cell;
        TraceRow row;
        std::getline(ls, cell, ',');
        row.iter = std::stol(cell);
        std::getline(ls, cell, ',');
        row.tau = std::stod(cell);
        std::getline(ls, cell, ',');
        row.t = std::stod(cell);
        std::getline(ls, cell, ',');
        row.f_err = std::stod(cell);
        std::getline(ls, cell, ',');
        row.grad_norm = std::stod(cell);
        std::getline(ls, cell, ',');
        row.step_physical = std::stod(cell);
        if (std::getline(ls, cell, ',') && !cell.empty()) {
            row.orth_err = std::stod(cell);
            trace.so3 = true;
        }
        trace.rows.push_back(row);
    }
    return trace;
}

} // namespace tavi
