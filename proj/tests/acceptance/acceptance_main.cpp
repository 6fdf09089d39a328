// Acceptance suite: runs every experiment with its default configuration and prints one
// PASS/FAIL line per criterion. Tolerances are pinned here, independently of the bands the
// experiments report. A FAIL is tolerated by the exit status only for the sub-checks listed in
// kKnownFailures, each with the measured reason; those lines still read FAIL.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvlab/experiments.hpp"

using namespace curvlab;

namespace {

struct SubCheck {
    std::string label;
    double value = std::nan("");
    bool pass = false;
    bool known_failure = false;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::vector<SubCheck> parts;
};

struct KnownFailure {
    int criterion;
    std::string label;
    std::string reason;
};

const std::vector<KnownFailure> kKnownFailures = {
    {6, "thresholding slope alpha=0.5",
     "the disc's error curve on a 1024^2 grid is still pre-asymptotic: local slopes steepen from about -1.1 "
     "to -2 across the fit window and the fitted slope grows with the grid (-1.21 at 512^2, -1.34 at 1024^2, "
     "-1.58 at 2048^2)"},
    {9, "max coefficient slope alpha=0",
     "for alpha=0 the atoms are ridge-like and meet the curved edge of the disc over a length 2^{-j/2}, so the "
     "largest coefficients decay like 2^{-j}; the a-priori bound 2^{-j/2} is an upper bound that this cartoon does "
     "not attain"},
};

bool is_known(int id, const std::string& label) {
    for (const auto& k : kKnownFailures)
        if (k.criterion == id && k.label == label) return true;
    return false;
}

std::string alpha_label(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", a);
    return buf;
}

class Suite {
public:
    explicit Suite(std::string out) : out_(std::move(out)) {}

    const ExperimentResult& result(const std::string& name) {
        auto it = results_.find(name);
        if (it != results_.end()) return it->second;
        ExperimentConfig cfg = ExperimentConfig::defaults(name);
        cfg.out = out_;
        std::printf("running %s ...\n", name.c_str());
        std::fflush(stdout);
        return results_.emplace(name, run_experiment(cfg)).first->second;
    }

    // Adds a sub-check on the value an experiment reported; lo/hi are this suite's tolerances.
    void require(Criterion& c, const std::string& experiment, const std::string& check,
                 std::optional<double> alpha, std::optional<double> lo, std::optional<double> hi,
                 const std::string& label) {
        const Check* k = result(experiment).find(check, alpha);
        SubCheck s;
        s.label = label;
        if (k) {
            s.value = k->value;
            s.pass = std::isfinite(k->value) && (!lo || k->value >= *lo) && (!hi || k->value <= *hi);
        }
        s.known_failure = !s.pass && is_known(c.id, label);
        c.parts.push_back(s);
    }

private:
    std::string out_;
    std::map<std::string, ExperimentResult> results_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string out = "acceptance_reports";
    app.add_option("--out", out, "Directory for the experiment reports");
    CLI11_PARSE(app, argc, argv);

    Suite suite(out);
    std::vector<Criterion> criteria;
    const std::vector<double> frame_alphas = {0.0, 0.25, 1.0 / 3.0, 0.5, 0.75};

    try {
        {
            Criterion c{1, "partition of unity on a 512^2 lattice", {}};
            for (double a : frame_alphas) {
                suite.require(c, "verify-frame", "partition_deviation", a, std::nullopt, 1e-12,
                              "deviation alpha=" + alpha_label(a));
                suite.require(c, "verify-frame", "partition_seconds", a, std::nullopt, 10.0,
                              "seconds alpha=" + alpha_label(a));
            }
            criteria.push_back(c);
        }
        {
            Criterion c{2, "tight frame on 20 random 256^2 images", {}};
            for (double a : frame_alphas) {
                suite.require(c, "verify-frame", "parseval_deviation", a, std::nullopt, 1e-10,
                              "Parseval alpha=" + alpha_label(a));
                suite.require(c, "verify-frame", "reconstruction_error", a, std::nullopt, 1e-10,
                              "reconstruction alpha=" + alpha_label(a));
                suite.require(c, "verify-frame", "parseval_seconds", a, std::nullopt, 30.0,
                              "seconds alpha=" + alpha_label(a));
            }
            criteria.push_back(c);
        }
        {
            Criterion c{3, "wrapped transform equals the direct-sum oracle on 64^2", {}};
            for (double a : frame_alphas)
                suite.require(c, "verify-frame", "oracle_deviation", a, std::nullopt, 1e-9,
                              "relative deviation alpha=" + alpha_label(a));
            criteria.push_back(c);
        }
        {
            Criterion c{4, "Bessel closed forms and remainder stability", {}};
            suite.require(c, "bessel-check", "closed_form_deviation_half", std::nullopt, std::nullopt, 1e-12,
                          "J_{1/2} on (0,50]");
            suite.require(c, "bessel-check", "closed_form_deviation_minus_half", std::nullopt, std::nullopt, 1e-12,
                          "J_{-1/2} on (0,50]");
            suite.require(c, "bessel-check", "remainder_sup", std::nullopt, 0.0, 1e6, "scaled remainder sup");
            suite.require(c, "bessel-check", "remainder_relative_change", std::nullopt, std::nullopt, 0.01,
                          "change under grid doubling");
            criteria.push_back(c);
        }
        {
            Criterion c{5, "wedge-energy law", {}};
            for (double a : {0.0, 0.5, 0.75}) {
                const double t = -(2.0 - a);
                suite.require(c, "wedge-energy", "core_energy_slope", a, t - 0.2, t + 0.2,
                              "core slope alpha=" + alpha_label(a));
            }
            for (double a : {0.5, 0.75})
                suite.require(c, "wedge-energy", "digital_energy_deviation", a, std::nullopt, 0.10,
                              "digital/analytic alpha=" + alpha_label(a));
            criteria.push_back(c);
        }
        {
            Criterion c{6, "curved-edge lower bound", {}};
            for (double a : {0.25, 0.5}) {
                const double t = -1.0 / (1.0 - a);
                suite.require(c, "disc-lower-bound", "tail_bound_slope", a, t - 0.3, t + 0.3,
                              "tail bound slope alpha=" + alpha_label(a));
            }
            suite.require(c, "disc-lower-bound", "thresholding_slope", 0.5, -2.4, -1.7,
                          "thresholding slope alpha=0.5");
            suite.require(c, "disc-lower-bound", "runtime_seconds", std::nullopt, std::nullopt, 300.0, "seconds");
            criteria.push_back(c);
        }
        {
            Criterion c{7, "thresholding cannot beat the bound", {}};
            suite.require(c, "disc-rate", "thresholding_slope", 1.0 / 3.0, -1.75, std::nullopt,
                          "thresholding slope alpha=1/3");
            criteria.push_back(c);
        }
        {
            Criterion c{8, "straight-edge rates", {}};
            suite.require(c, "straight-edge-rate", "thresholding_slope", 0.5, -2.45, -1.7, "half-space alpha=0.5");
            suite.require(c, "straight-edge-rate", "thresholding_slope", 0.25, std::nullopt, -1.8,
                          "half-space alpha=0.25");
            suite.require(c, "straight-edge-rate", "bump_thresholding_slope", 0.5, std::nullopt, -1.9,
                          "smooth bump alpha=0.5");
            criteria.push_back(c);
        }
        {
            Criterion c{9, "a-priori coefficient decay", {}};
            for (double a : {0.0, 0.5}) {
                const double t = -(1.0 + a) / 2.0;
                suite.require(c, "apriori-decay", "max_coefficient_slope", a, t - 0.15, t + 0.15,
                              "max coefficient slope alpha=" + alpha_label(a));
                suite.require(c, "apriori-decay", "atom_l1_slope", a, t - 0.25, t + 0.25,
                              "atom L1 slope alpha=" + alpha_label(a));
            }
            criteria.push_back(c);
        }
        {
            Criterion c{10, "molecules", {}};
            suite.require(c, "molecule-distance", "self_distance_deviation", 0.5, 0.0, 0.0, "omega(p,p) - 1");
            suite.require(c, "molecule-distance", "consistency_final_growth", 0.5, std::nullopt, 0.05,
                          "final growth");
            criteria.push_back(c);
        }
        {
            Criterion c{11, "generator support", {}};
            for (double a : {0.0, 0.25, 0.5, 0.75}) {
                suite.require(c, "generator-decay", "max_outside_unit_square", a, 0.0, 0.0,
                              "outside alpha=" + alpha_label(a));
                suite.require(c, "generator-decay", "max_on_inner_box", a, 0.0, 0.0,
                              "inner box alpha=" + alpha_label(a));
            }
            criteria.push_back(c);
        }
    } catch (const std::exception& e) {
        std::printf("acceptance suite aborted: %s\n", e.what());
        return 2;
    }

    int passed = 0;
    bool unexplained = false;
    std::printf("\n");
    for (const auto& c : criteria) {
        bool ok = true;
        for (const auto& p : c.parts) ok = ok && p.pass;
        passed += ok ? 1 : 0;
        std::string detail;
        for (const auto& p : c.parts) {
            if (p.pass && !ok) continue;
            if (!detail.empty()) detail += "; ";
            char buf[64];
            std::snprintf(buf, sizeof buf, " = %.4g", p.value);
            detail += p.label + buf + (p.pass ? "" : p.known_failure ? " (documented)" : " (UNEXPLAINED)");
            if (ok && c.parts.size() > 4) {
                detail = std::to_string(c.parts.size()) + " sub-checks within tolerance";
                break;
            }
        }
        for (const auto& p : c.parts) unexplained = unexplained || (!p.pass && !p.known_failure);
        std::printf("criterion %2d %s  %s: %s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), detail.c_str());
    }
    std::printf("\n%d/%zu criteria pass\n", passed, criteria.size());
    for (const auto& k : kKnownFailures)
        for (const auto& c : criteria)
            for (const auto& p : c.parts)
                if (c.id == k.criterion && p.label == k.label && !p.pass)
                    std::printf("documented failure, criterion %d (%s): %s\n", k.criterion, k.label.c_str(),
                                k.reason.c_str());
    if (unexplained) std::printf("some failures are not documented\n");
    return unexplained ? 1 : 0;
}
