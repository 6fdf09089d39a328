#include "curvlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "curvlab/approximation.hpp"
#include "curvlab/bessel.hpp"
#include "curvlab/molecules.hpp"
#include "curvlab/tiling.hpp"
#include "curvlab/transform.hpp"

namespace curvlab {

using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool near(double a, double b) { return std::fabs(a - b) < 1e-9; }

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "verify-frame",  "wedge-energy", "disc-rate",         "disc-lower-bound", "straight-edge-rate",
        "apriori-decay", "bessel-check", "molecule-distance", "generator-decay"};
    return names;
}

CartoonSpec disc_cartoon() {
    CartoonSpec c;
    c.kind = CartoonKind::Disc;
    c.radius = 0.5;
    return c;
}

CartoonSpec edge_cartoon() {
    CartoonSpec c;
    c.kind = CartoonKind::HalfSpace;
    c.angle = 0.3;
    c.offset = 0.0;
    c.smooth = true;
    c.beta = 2;
    c.nu = 1.0;
    return c;
}

// Acceptance bands of the rate experiments.
std::pair<std::optional<double>, std::optional<double>> disc_rate_band(double alpha) {
    if (near(alpha, 0.5)) return {-2.4, -1.7};
    return {-1.0 / std::max(alpha, 1.0 - alpha) - 0.25, std::nullopt};
}

std::pair<std::optional<double>, std::optional<double>> edge_rate_band(double alpha, int beta) {
    if (near(alpha, 0.5) && beta == 2) return {-2.45, -1.7};
    double rate = alpha > 0 ? std::min(1.0 / alpha, double(beta)) : double(beta);
    return {std::nullopt, -rate + 0.2};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_alpha(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", a);
    return buf;
}

template <class T>
T field(const json& j, const std::string& name) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("invalid value for field '" + name + "': " + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------- configuration

json ExperimentConfig::to_json() const {
    return {{"experiment", experiment},
            {"s", s},
            {"alphas", alphas},
            {"grid", grid},
            {"seed", seed},
            {"out", out},
            {"cartoon", cartoon.to_json()},
            {"schedule", {{"start", schedule.start}, {"ratio", schedule.ratio}, {"max", schedule.max}}},
            {"options", options}};
}

void ExperimentConfig::validate() const {
    if (std::find(experiment_names().begin(), experiment_names().end(), experiment) == experiment_names().end())
        throw ConfigError("unknown experiment '" + experiment + "'");
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("field 's' must be positive");
    if (alphas.empty()) throw ConfigError("field 'alphas' must not be empty");
    for (double a : alphas)
        if (!std::isfinite(a) || a > 1.0) throw ConfigError("field 'alphas' entries must be finite and at most 1");
    if (grid < 16 || grid % 2 != 0) throw ConfigError("field 'grid' must be even and at least 16");
    if (schedule.start < 1) throw ConfigError("field 'schedule.start' must be at least 1");
    if (!(schedule.ratio > 1.0)) throw ConfigError("field 'schedule.ratio' must exceed 1");
    if (schedule.max < 0) throw ConfigError("field 'schedule.max' must be nonnegative");
    if (out.empty()) throw ConfigError("field 'out' must not be empty");
    if (cartoon.antialias < 1) throw ConfigError("field 'cartoon.antialias' must be at least 1");
    if (cartoon.beta < 0) throw ConfigError("field 'cartoon.beta' must be nonnegative");
}

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    c.cartoon = disc_cartoon();
    if (experiment == "verify-frame") {
        c.alphas = {0.0, 0.25, 1.0 / 3.0, 0.5, 0.75};
        c.grid = 256;
        c.options = {{"partition_grid", 512}, {"oracle_grid", 64}, {"trials", 20}};
    } else if (experiment == "wedge-energy") {
        c.alphas = {0.0, 0.5, 0.75};
        c.options = {{"digital_alphas", {0.5, 0.75}}, {"digital_scales", 4}};
    } else if (experiment == "disc-rate") {
        c.alphas = {1.0 / 3.0};
    } else if (experiment == "disc-lower-bound") {
        c.alphas = {0.25, 0.5};
        c.options = {{"measured_alpha", 0.5}, {"virtual_grid", 32768}, {"bound_max_n", 1 << 20}};
    } else if (experiment == "straight-edge-rate") {
        c.alphas = {0.5, 0.25};
        c.cartoon = edge_cartoon();
        c.options = {{"control_alpha", 0.5}};
    } else if (experiment == "apriori-decay") {
        c.alphas = {0.0, 0.5};
        c.options = {{"top_scales", 4}};
    } else if (experiment == "bessel-check") {
        c.alphas = {0.5};
        c.options = {{"closed_form_r_max", 50.0},
                     {"closed_form_samples", 50000},
                     {"remainder_r_min", 1.0},
                     {"remainder_r_max", 100.0},
                     {"remainder_samples", 20000}};
    } else if (experiment == "molecule-distance") {
        c.alphas = {0.5};
        c.options = {{"s_a", 1.0}, {"s_b", 0.5}, {"k", 3.0}, {"max_scale", 8.0}, {"radii", {1.0, 2.0, 4.0, 8.0}}};
    } else if (experiment == "generator-decay") {
        c.alphas = {0.0, 0.25, 0.5, 0.75};
        c.options = {{"step", 1e-3}, {"extent", 0.75}};
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    return c;
}

ExperimentConfig ExperimentConfig::resolve(const json& input, const std::string& experiment) {
    if (input.is_null()) return resolve(json::object(), experiment);
    if (!input.is_object()) throw ConfigError("configuration must be a JSON object");
    // A defaults document holds one configuration per experiment.
    if (input.contains("experiments") && input["experiments"].is_object()) {
        if (experiment.empty() || !input["experiments"].contains(experiment))
            throw ConfigError("field 'experiments' has no entry for '" + experiment + "'");
        return resolve(input["experiments"][experiment], experiment);
    }
    const json& doc = input.contains("config") && input["config"].is_object() ? input["config"] : input;
    std::string name = experiment;
    if (doc.contains("experiment")) {
        auto named = field<std::string>(doc["experiment"], "experiment");
        if (!name.empty() && named != name)
            throw ConfigError("field 'experiment' is '" + named + "' but '" + name + "' was requested");
        name = named;
    }
    if (name.empty()) throw ConfigError("field 'experiment' is missing");
    ExperimentConfig c = defaults(name);

    static const std::set<std::string> cartoon_keys = {"kind", "antialias", "radius", "center", "angle", "offset",
                                                       "cos_k", "sin_k", "smooth", "beta", "nu"};
    for (const auto& [key, value] : doc.items()) {
        if (key == "experiment") continue;
        if (key == "s") {
            c.s = field<double>(value, key);
        } else if (key == "alpha") {
            c.alphas = {field<double>(value, key)};
        } else if (key == "alphas") {
            c.alphas = field<std::vector<double>>(value, key);
        } else if (key == "grid") {
            c.grid = field<int>(value, key);
        } else if (key == "seed") {
            c.seed = field<std::uint64_t>(value, key);
        } else if (key == "out") {
            c.out = field<std::string>(value, key);
        } else if (key == "cartoon") {
            if (!value.is_object()) throw ConfigError("field 'cartoon' must be an object");
            json merged = c.cartoon.to_json();
            for (const auto& [ck, cv] : value.items()) {
                if (!cartoon_keys.count(ck)) throw ConfigError("unknown field 'cartoon." + ck + "'");
                merged[ck] = cv;
            }
            try {
                c.cartoon = CartoonSpec::from_json(merged);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("invalid value for field 'cartoon': ") + e.what());
            }
        } else if (key == "schedule") {
            if (!value.is_object()) throw ConfigError("field 'schedule' must be an object");
            for (const auto& [sk, sv] : value.items()) {
                if (sk == "start")
                    c.schedule.start = field<std::int64_t>(sv, "schedule.start");
                else if (sk == "ratio")
                    c.schedule.ratio = field<double>(sv, "schedule.ratio");
                else if (sk == "max")
                    c.schedule.max = field<std::int64_t>(sv, "schedule.max");
                else
                    throw ConfigError("unknown field 'schedule." + sk + "'");
            }
        } else if (key == "options") {
            if (!value.is_object()) throw ConfigError("field 'options' must be an object");
            for (const auto& [ok, ov] : value.items()) {
                if (!c.options.contains(ok)) throw ConfigError("unknown field 'options." + ok + "'");
                const json& def = c.options[ok];
                bool same = (def.is_number() && ov.is_number()) || (def.is_array() && ov.is_array()) ||
                            (def.is_string() && ov.is_string()) || (def.is_boolean() && ov.is_boolean());
                if (!same) throw ConfigError("invalid value for field 'options." + ok + "'");
                c.options[ok] = ov;
            }
        } else {
            throw ConfigError("unknown field '" + key + "'");
        }
    }
    c.validate();
    return c;
}

json default_config_document() {
    json experiments = json::object();
    for (const auto& name : experiment_names()) experiments[name] = ExperimentConfig::defaults(name).to_json();
    return {{"experiments", experiments}};
}

std::string effective_output_dir(const ExperimentConfig& cfg, const std::optional<std::string>& cli_out) {
    if (cli_out && !cli_out->empty()) return *cli_out;
    if (const char* env = std::getenv("CURVLAB_OUT_DIR"); env && *env) return env;
    return cfg.out;
}

// ---------------------------------------------------------------- results

std::string Check::describe() const {
    std::string s = std::string(pass ? "PASS " : "FAIL ") + name;
    if (alpha) s += "[alpha=" + fmt_alpha(*alpha) + "]";
    s += " = " + fmt(value);
    if (lo && hi && *lo == *hi)
        s += " (required " + fmt(*lo) + ")";
    else if (lo && hi)
        s += " (band [" + fmt(*lo) + ", " + fmt(*hi) + "])";
    else if (lo)
        s += " (required >= " + fmt(*lo) + ")";
    else if (hi)
        s += " (required <= " + fmt(*hi) + ")";
    return s;
}

json Check::to_json() const {
    json j = {{"name", name}, {"value", value}, {"pass", pass}};
    j["alpha"] = alpha ? json(*alpha) : json(nullptr);
    j["lo"] = lo ? json(*lo) : json(nullptr);
    j["hi"] = hi ? json(*hi) : json(nullptr);
    return j;
}

std::string ExperimentResult::verdict_line() const {
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.pass ? 0 : 1;
    return std::string(pass ? "PASS " : "FAIL ") + experiment + ": " + std::to_string(checks.size() - failed) + "/" +
           std::to_string(checks.size()) + " checks within their bands";
}

const Check* ExperimentResult::find(const std::string& name, std::optional<double> alpha) const {
    for (const auto& c : checks)
        if (c.name == name && (!alpha || (c.alpha && near(*c.alpha, *alpha)))) return &c;
    return nullptr;
}

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> info = {
        {"verify-frame", "partition of unity, Parseval and reconstruction, direct-sum oracle",
         "partition <= 1e-12 (< 10 s each); Parseval and reconstruction <= 1e-10 (< 30 s); oracle <= 1e-9"},
        {"wedge-energy", "core energy decay of the disc spectrum and digital versus analytic wedge energies",
         "core slope per scale in -s(2-alpha) +- 0.2; digital/analytic within 10% on the top scales"},
        {"disc-rate", "thresholding rate of the disc", "alpha=1/2: [-2.4, -1.7]; otherwise >= -1/max(alpha,1-alpha) - 0.25"},
        {"disc-lower-bound", "core-energy tail estimate and measured thresholding rate of the disc",
         "bound slope in -1/(1-alpha) +- 0.3; measured slope at alpha=1/2 in [-2.4, -1.7]; < 5 min"},
        {"straight-edge-rate", "thresholding rate of a smooth half-space and of a smooth bump",
         "alpha=1/2: [-2.45, -1.7]; otherwise <= -min(1/alpha, beta) + 0.2; bump <= -1.9"},
        {"apriori-decay", "per-scale maximal coefficients of the disc and atom L1 norms",
         "max slope in -s(1+alpha)/2 +- 0.15; atom L1 slope in -s(1+alpha)/2 +- 0.25"},
        {"bessel-check", "series against closed forms and the remainder of the leading asymptotic term",
         "closed forms <= 1e-12 on (0, 50]; remainder sup changes < 1% under grid doubling"},
        {"molecule-distance", "index distance and truncated consistency sums",
         "omega(p,p) = 1 exactly; final growth of the consistency sums < 5%"},
        {"generator-decay", "support of the rescaled generators",
         "exactly zero outside [-1/2,1/2]^2 and on the inner box for all j >= 1"},
    };
    return info;
}

// ---------------------------------------------------------------- experiments

namespace {

struct Outcome {
    std::vector<Check> checks;
    std::vector<std::pair<std::string, Table>> tables;  // suffix ("" for the main table), table
    std::vector<std::vector<int>> plot_columns;         // per table: x column followed by y columns
    std::vector<std::pair<bool, bool>> plot_log;
    json metrics = json::object();

    void check(std::string name, std::optional<double> alpha, double value, std::optional<double> lo,
               std::optional<double> hi) {
        bool ok = std::isfinite(value) && (!lo || value >= *lo) && (!hi || value <= *hi);
        checks.push_back({std::move(name), alpha, value, lo, hi, ok});
    }
    void table(std::string suffix, Table t, std::vector<int> cols, bool log_x = true, bool log_y = true) {
        tables.emplace_back(std::move(suffix), std::move(t));
        plot_columns.push_back(std::move(cols));
        plot_log.emplace_back(log_x, log_y);
    }
};

double opt_num(const ExperimentConfig& c, const char* key) { return c.options.at(key).get<double>(); }
int opt_int(const ExperimentConfig& c, const char* key) {
    double v = c.options.at(key).get<double>();
    if (v != std::floor(v)) throw ConfigError(std::string("field 'options.") + key + "' must be an integer");
    return int(v);
}

FrameParams params_for(const ExperimentConfig& c, double alpha, int grid) {
    try {
        return FrameParams::make(c.s, alpha, grid);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("frame parameters (s, alpha, grid): ") + e.what());
    }
}

RealGrid random_image(int n, std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
    std::seed_seq seq{seed, stream, trial};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RealGrid g(n);
    for (auto& v : g.data) v = u(rng);
    return g;
}

void run_verify_frame(const ExperimentConfig& c, Outcome& o) {
    const int pgrid = opt_int(c, "partition_grid"), ogrid = opt_int(c, "oracle_grid"), trials = opt_int(c, "trials");
    if (trials < 1) throw ConfigError("field 'options.trials' must be at least 1");
    Table t{{"alpha", "partition_deviation", "parseval_deviation", "reconstruction_error", "oracle_deviation",
             "coefficients", "redundancy"},
            {}};
    for (std::size_t ai = 0; ai < c.alphas.size(); ++ai) {
        const double a = c.alphas[ai];

        auto t0 = Clock::now();
        auto layout = build_layout(params_for(c, a, pgrid));
        const double partition = verify_partition(layout, pgrid);
        const double partition_s = seconds_since(t0);

        t0 = Clock::now();
        DigitalCurveletFrame frame(params_for(c, a, c.grid));
        double parseval = 0.0, recon = 0.0;
        for (int k = 0; k < trials; ++k) {
            RealGrid f = random_image(c.grid, c.seed, ai, std::uint64_t(k));
            const double e = f.l2_norm_squared();
            CoefficientSet coef = frame.analyze(f);
            parseval = std::max(parseval, std::fabs(coef.energy() - e) / e);
            RealGrid g = frame.synthesize(coef);
            double d = 0.0;
            for (std::size_t i = 0; i < f.data.size(); ++i) d += (f.data[i] - g.data[i]) * (f.data[i] - g.data[i]);
            d *= f.spacing() * f.spacing();
            recon = std::max(recon, std::sqrt(d / e));
        }
        const double parseval_s = seconds_since(t0);

        DigitalCurveletFrame small(params_for(c, a, ogrid));
        RealGrid f = random_image(ogrid, c.seed, 1000 + ai, 0);
        CoefficientSet coef = small.analyze(f);
        double oracle = 0.0;
        for (std::size_t w = 0; w < small.layout().wedges.size(); ++w) {
            auto direct = small.analyze_direct(f, small.layout().wedges[w].index);
            auto fast = coef.wedge(w);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < direct.size(); ++i) {
                num += std::norm(direct[i] - fast[i]);
                den += std::norm(direct[i]);
            }
            if (den > 0.0) oracle = std::max(oracle, std::sqrt(num / den));
            else oracle = std::max(oracle, std::sqrt(num));
        }

        const double count = double(frame.layout().coefficient_count());
        t.rows.push_back({a, partition, parseval, recon, oracle, count, count / (double(c.grid) * c.grid)});
        o.check("partition_deviation", a, partition, std::nullopt, 1e-12);
        o.check("partition_seconds", a, partition_s, std::nullopt, 10.0);
        o.check("parseval_deviation", a, parseval, std::nullopt, 1e-10);
        o.check("reconstruction_error", a, recon, std::nullopt, 1e-10);
        o.check("parseval_seconds", a, parseval_s, std::nullopt, 30.0);
        o.check("oracle_deviation", a, oracle, std::nullopt, 1e-9);
    }
    o.table("", std::move(t), {0, 1, 2, 3, 4}, false, true);
}

// Smallest scale whose core starts beyond unit frequency: below it the core energy of the
// disc is still governed by the low-frequency plateau of its spectrum.
int first_asymptotic_scale(const FrameParams& p) {
    int j = 1;
    while (j <= p.j_max && p.corona_constant * std::exp2((j - 1) * p.s) * p.tau2 < 1.0) ++j;
    return j;
}

void require_centred_disc(const ExperimentConfig& c) {
    const auto& k = c.cartoon;
    if (k.kind != CartoonKind::Disc || k.smooth || k.radius != 0.5 || k.center1 != 0.0 || k.center2 != 0.0)
        throw ConfigError("field 'cartoon': " + c.experiment + " needs the centred disc of radius 1/2");
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

void run_wedge_energy(const ExperimentConfig& c, Outcome& o) {
    require_centred_disc(c);
    Table analytic{{"alpha", "j", "core_energy", "fitted"}, {}};
    for (double a : c.alphas) {
        const FrameParams p = params_for(c, a, c.grid);
        const WindowProfile prof(p);
        const int j0 = first_asymptotic_scale(p);
        std::vector<double> x, y;
        for (int j = 1; j <= p.j_max; ++j) {
            const double e = wedge_energy_quadrature(make_wedge(p, j, 0), EnergyRegion::Core, prof).value;
            const bool fitted = j >= j0 && e > 0;
            analytic.rows.push_back({a, double(j), e, fitted ? 1.0 : 0.0});
            if (fitted) {
                x.push_back(j);
                y.push_back(std::log2(e));
            }
        }
        const double target = -c.s * (2.0 - a);
        o.check("core_energy_slope", a, linear_slope(x, y), target - 0.2, target + 0.2);
        o.metrics["first_fitted_scale"][fmt_alpha(a)] = j0;
    }
    o.table("", std::move(analytic), {1, 2}, false, true);

    const int top = opt_int(c, "digital_scales");
    if (top < 1) throw ConfigError("field 'options.digital_scales' must be at least 1");
    Table digital{{"alpha", "j", "ell", "digital_energy", "analytic_energy", "ratio"}, {}};
    const RealGrid disc = render(c.cartoon, c.grid);
    for (double a : c.options.at("digital_alphas").get<std::vector<double>>()) {
        DigitalCurveletFrame frame(params_for(c, a, c.grid));
        const auto& layout = frame.layout();
        const WindowProfile prof(layout.params);
        CoefficientSet coef = frame.analyze(disc);
        const int j_lo = std::max(1, layout.params.j_max - top + 1);
        double worst = 0.0;
        for (std::size_t w = 0; w < layout.wedges.size(); ++w) {
            const auto& spec = layout.wedges[w];
            if (spec.kind != TileKind::Wedge || spec.index.j < j_lo) continue;
            double dig = 0.0;
            for (const auto& v : coef.wedge(w)) dig += std::norm(v);
            const double ana = wedge_energy_quadrature(spec, EnergyRegion::Window, prof).value;
            const double ratio = dig / ana;
            worst = std::max(worst, std::fabs(ratio - 1.0));
            digital.rows.push_back({a, double(spec.index.j), double(spec.index.ell), dig, ana, ratio});
        }
        o.check("digital_energy_deviation", a, worst, std::nullopt, 0.10);
    }
    o.table("digital", std::move(digital), {1, 5}, false, false);
}

struct RateRun {
    ErrorCurve curve;
    RateReport fit;
};

RateRun thresholding_rate(const ExperimentConfig& c, const CartoonSpec& cartoon, double alpha) {
    DigitalCurveletFrame frame(params_for(c, alpha, c.grid));
    const RealGrid f = render(cartoon, c.grid);
    const std::int64_t total = frame.layout().coefficient_count();
    const std::int64_t hi = c.schedule.max > 0 ? c.schedule.max : total / 4;
    RateRun r;
    r.curve = error_curve(f, frame, geometric_schedule(c.schedule.start, c.schedule.ratio, hi));
    r.fit = fit_rate(r.curve, {double(c.schedule.start), double(hi)});
    return r;
}

void add_curve(Table& t, double alpha, const ErrorCurve& curve) {
    for (const auto& p : curve.points) t.rows.push_back({alpha, double(p.n), p.err2, p.tail2});
}

void run_disc_rate(const ExperimentConfig& c, Outcome& o) {
    Table t{{"alpha", "n", "err2", "tail2"}, {}};
    for (double a : c.alphas) {
        RateRun r = thresholding_rate(c, c.cartoon, a);
        auto [lo, hi] = disc_rate_band(a);
        o.check("thresholding_slope", a, r.fit.slope, lo, hi);
        o.metrics["fits"][fmt_alpha(a)] = r.fit.to_json();
        add_curve(t, a, r.curve);
    }
    o.table("", std::move(t), {1, 2, 3});
}

void run_disc_lower_bound(const ExperimentConfig& c, Outcome& o) {
    const auto t0 = Clock::now();
    const int virtual_grid = opt_int(c, "virtual_grid");
    const auto max_n = std::int64_t(opt_num(c, "bound_max_n"));
    Table bound{{"alpha", "n", "tail_bound"}, {}};
    for (double a : c.alphas) {
        if (!(a < 1.0)) throw ConfigError("field 'alphas': the tail bound needs alpha < 1");
        const FrameParams p = params_for(c, a, c.grid);
        TailBoundOptions topt;
        topt.j_top = FrameParams::default_j_max(p.s, p.corona_constant, p.tau2, virtual_grid);
        auto curve = bound1_tail_estimator(p, geometric_schedule(c.schedule.start, c.schedule.ratio, max_n), topt);
        std::vector<double> x, y;
        for (const auto& q : curve.points) {
            x.push_back(double(q.n));
            y.push_back(q.bound);
            bound.rows.push_back({a, double(q.n), q.bound});
        }
        auto fit = fit_loglog(x, y, double(c.schedule.start), double(curve.wedge_count) / 4.0);
        const double target = -1.0 / (1.0 - a);
        o.check("tail_bound_slope", a, fit.slope, target - 0.3, target + 0.3);
        o.metrics["bound_fits"][fmt_alpha(a)] = fit.to_json();
        o.metrics["bound_wedges"][fmt_alpha(a)] = curve.wedge_count;
    }
    o.table("", std::move(bound), {1, 2});

    const double ma = opt_num(c, "measured_alpha");
    Table measured{{"alpha", "n", "err2", "tail2"}, {}};
    RateRun r = thresholding_rate(c, c.cartoon, ma);
    auto [lo, hi] = disc_rate_band(ma);
    o.check("thresholding_slope", ma, r.fit.slope, lo, hi);
    o.metrics["measured_fit"] = r.fit.to_json();
    add_curve(measured, ma, r.curve);
    o.table("measured", std::move(measured), {1, 2, 3});
    o.check("runtime_seconds", std::nullopt, seconds_since(t0), std::nullopt, 300.0);
}

void run_straight_edge(const ExperimentConfig& c, Outcome& o) {
    if (c.cartoon.kind != CartoonKind::HalfSpace)
        throw ConfigError("field 'cartoon': straight-edge-rate needs a half-space cartoon");
    Table t{{"alpha", "n", "err2", "tail2"}, {}};
    for (double a : c.alphas) {
        RateRun r = thresholding_rate(c, c.cartoon, a);
        auto [lo, hi] = edge_rate_band(a, c.cartoon.smooth ? c.cartoon.beta : 1000);
        o.check("thresholding_slope", a, r.fit.slope, lo, hi);
        o.metrics["fits"][fmt_alpha(a)] = r.fit.to_json();
        add_curve(t, a, r.curve);
    }
    o.table("", std::move(t), {1, 2, 3});

    CartoonSpec bump = c.cartoon;
    bump.kind = CartoonKind::SmoothBump;
    bump.smooth = true;
    const double ca = opt_num(c, "control_alpha");
    RateRun r = thresholding_rate(c, bump, ca);
    o.check("bump_thresholding_slope", ca, r.fit.slope, std::nullopt, -1.9);
    o.metrics["bump_fit"] = r.fit.to_json();
    Table control{{"alpha", "n", "err2", "tail2"}, {}};
    add_curve(control, ca, r.curve);
    o.table("bump", std::move(control), {1, 2, 3});
}

void run_apriori(const ExperimentConfig& c, Outcome& o) {
    const int top = opt_int(c, "top_scales");
    if (top < 2) throw ConfigError("field 'options.top_scales' must be at least 2");
    const RealGrid f = render(c.cartoon, c.grid);
    double f_sup = 0.0;
    for (double v : f.data) f_sup = std::max(f_sup, std::fabs(v));
    Table t{{"alpha", "j", "max_coefficient", "atom_l1", "implied_constant"}, {}};
    for (double a : c.alphas) {
        DigitalCurveletFrame frame(params_for(c, a, c.grid));
        const auto& layout = frame.layout();
        const int j_hi = layout.params.j_max, j_lo = std::max(1, j_hi - top + 1);
        AprioriReport rep = apriori_decay_check(frame.analyze(f), f_sup, j_lo, j_hi);
        std::vector<double> x, y;
        for (const auto& sm : rep.scales) {
            double l1 = std::numeric_limits<double>::quiet_NaN();
            if (sm.j >= j_lo && sm.j <= j_hi) {
                const long w = layout.find(sm.j, 0);
                l1 = frame.atom({std::size_t(w), 0, 0}).l1_norm;
                x.push_back(sm.j);
                y.push_back(std::log2(l1));
            }
            t.rows.push_back({a, double(sm.j), sm.max_abs, l1, sm.implied_constant});
        }
        o.check("max_coefficient_slope", a, rep.slope, rep.target - 0.15, rep.target + 0.15);
        o.check("atom_l1_slope", a, linear_slope(x, y), rep.target - 0.25, rep.target + 0.25);
        o.metrics["scale_window"][fmt_alpha(a)] = {j_lo, j_hi};
    }
    o.table("", std::move(t), {1, 2, 3}, false, true);
}

void run_bessel(const ExperimentConfig& c, Outcome& o) {
    const double r_max = opt_num(c, "closed_form_r_max");
    const int samples = opt_int(c, "closed_form_samples");
    if (!(r_max > 0.0) || samples < 1) throw ConfigError("field 'options.closed_form_*' must be positive");
    Table t{{"order", "r", "series", "closed_form", "abs_deviation"}, {}};
    const int stride = std::max(1, samples / 500);
    for (BesselOrder nu : {BesselOrder::Half, BesselOrder::MinusHalf}) {
        double worst = 0.0;
        for (int k = 1; k <= samples; ++k) {
            const double r = r_max * k / samples;
            const double series = bessel_j_series(nu, r);
            const double closed = bessel_j(nu, r);
            const double d = std::fabs(series - closed);
            worst = std::max(worst, d);
            if (k % stride == 0) t.rows.push_back({order_value(nu), r, series, closed, d});
        }
        o.check(nu == BesselOrder::Half ? "closed_form_deviation_half" : "closed_form_deviation_minus_half",
                std::nullopt, worst, std::nullopt, 1e-12);
    }
    o.table("", std::move(t), {1, 4}, false, true);

    const double lo = opt_num(c, "remainder_r_min"), hi = opt_num(c, "remainder_r_max");
    const int n = opt_int(c, "remainder_samples");
    if (!(lo > 0.0 && hi > lo) || n < 2) throw ConfigError("field 'options.remainder_*' is inconsistent");
    Table rem{{"samples", "sup_scaled_remainder", "argmax"}, {}};
    RemainderCheck coarse = remainder_bound_check(lo, hi, BesselOrder::One, std::size_t(n));
    RemainderCheck fine = remainder_bound_check(lo, hi, BesselOrder::One, std::size_t(2 * n));
    rem.rows.push_back({double(coarse.samples), coarse.sup_scaled, coarse.argmax});
    rem.rows.push_back({double(fine.samples), fine.sup_scaled, fine.argmax});
    o.check("remainder_sup", std::nullopt, fine.sup_scaled, 0.0, std::nullopt);
    o.check("remainder_relative_change", std::nullopt, std::fabs(fine.sup_scaled - coarse.sup_scaled) / fine.sup_scaled,
            std::nullopt, 0.01);
    o.table("remainder", std::move(rem), {0, 1}, false, false);

    double crossover = 0.0;
    for (BesselOrder nu : {BesselOrder::Zero, BesselOrder::One})
        crossover = std::max(crossover, std::fabs(bessel_j_series(nu, kBesselSwitchRadius) -
                                                  bessel_j_asymptotic(nu, kBesselSwitchRadius)));
    o.metrics["crossover_deviation"] = crossover;
}

void run_molecules(const ExperimentConfig& c, Outcome& o) {
    const double a = c.alphas.front();
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("field 'alphas': the index distance needs alpha in [0,1]");
    const double s_a = opt_num(c, "s_a"), s_b = opt_num(c, "s_b"), k = opt_num(c, "k");
    const double max_scale = opt_num(c, "max_scale");
    const auto radii = c.options.at("radii").get<std::vector<double>>();

    double self = 0.0;
    for (double s : {s_a, s_b})
        for (const auto& p : enumerate_curvelet_points(s, a, max_scale, radii.front()))
            self = std::max(self, std::fabs(index_distance(p, p, a) - 1.0));
    o.check("self_distance_deviation", a, self, 0.0, 0.0);

    ConsistencyReport rep;
    try {
        rep = consistency_sum(s_a, s_b, a, k, max_scale, radii);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field 'options': ") + e.what());
    }
    Table t{{"radius", "sup_a", "sup_b", "count_a", "count_b"}, {}};
    for (const auto& l : rep.levels)
        t.rows.push_back({l.radius, l.sup_a, l.sup_b, double(l.count_a), double(l.count_b)});
    o.check("consistency_final_growth", a, rep.final_growth, std::nullopt, 0.05);
    o.table("", std::move(t), {0, 1, 2}, true, false);
}

void run_generator(const ExperimentConfig& c, Outcome& o) {
    const double step = opt_num(c, "step"), extent = opt_num(c, "extent");
    Table t{{"alpha", "j", "sup", "max_outside", "max_inner_box", "probes"}, {}};
    for (double a : c.alphas) {
        std::vector<GeneratorDecayRow> rows;
        try {
            rows = generator_decay_check(params_for(c, a, c.grid), step, extent);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("field 'options': ") + e.what());
        }
        double outside = 0.0, inner = 0.0;
        for (const auto& r : rows) {
            t.rows.push_back({a, double(r.j), r.sup, r.max_outside, r.max_inner_box, double(r.probes)});
            if (r.j >= 1) {
                outside = std::max(outside, r.max_outside);
                inner = std::max(inner, r.max_inner_box);
            }
        }
        o.check("max_outside_unit_square", a, outside, 0.0, 0.0);
        o.check("max_on_inner_box", a, inner, 0.0, 0.0);
    }
    o.table("", std::move(t), {1, 2, 3, 4}, false, false);
}

const std::map<std::string, std::function<void(const ExperimentConfig&, Outcome&)>>& runners() {
    static const std::map<std::string, std::function<void(const ExperimentConfig&, Outcome&)>> m = {
        {"verify-frame", run_verify_frame},
        {"wedge-energy", run_wedge_energy},
        {"disc-rate", run_disc_rate},
        {"disc-lower-bound", run_disc_lower_bound},
        {"straight-edge-rate", run_straight_edge},
        {"apriori-decay", run_apriori},
        {"bessel-check", run_bessel},
        {"molecule-distance", run_molecules},
        {"generator-decay", run_generator},
    };
    return m;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = Clock::now();
    Outcome o;
    runners().at(cfg.experiment)(cfg, o);

    ExperimentResult res;
    res.experiment = cfg.experiment;
    res.checks = o.checks;
    res.pass = !o.checks.empty() &&
               std::all_of(o.checks.begin(), o.checks.end(), [](const Check& c) { return c.pass; });
    res.seconds = seconds_since(t0);

    for (double a : cfg.alphas)
        if (a < 0.0 || a >= 1.0)
            res.notes.push_back("alpha=" + fmt_alpha(a) + " lies outside the validated range [0, 1)" +
                                (a == 1.0 ? "; the tiles are isotropic" : ""));

    json checks = json::array();
    for (const auto& c : o.checks) checks.push_back(c.to_json());
    json tables = json::array();
    for (const auto& [suffix, table] : o.tables)
        tables.push_back(cfg.experiment + (suffix.empty() ? "" : "_" + suffix) + ".csv");
    res.summary = {{"experiment", cfg.experiment},
                   {"verdict", res.pass ? "PASS" : "FAIL"},
                   {"checks", checks},
                   {"metrics", o.metrics},
                   {"notes", res.notes},
                   {"tables", tables},
                   {"seconds", res.seconds},
                   {"config", cfg.to_json()}};

    for (std::size_t i = 0; i < o.tables.size(); ++i) {
        const auto& [suffix, table] = o.tables[i];
        const std::string stem = cfg.experiment + (suffix.empty() ? "" : "_" + suffix);
        const auto& cols = o.plot_columns[i];
        std::string plot = loglog_plot_script(stem, table, cols.front(), std::vector<int>(cols.begin() + 1, cols.end()),
                                              o.plot_log[i].first, o.plot_log[i].second);
        json meta = res.summary;
        meta["table"] = suffix.empty() ? "main" : suffix;
        res.reports.push_back(emit_report(cfg.out, stem, table, meta, plot));
    }
    return res;
}

}  // namespace curvlab
