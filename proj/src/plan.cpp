#include "perc/plan.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace perc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

bool valid_experiment(const std::string& id) {
    for (const auto& info : experiment_registry())
        if (info.id == id) return true;
    return false;
}

std::string valid_ids() {
    std::string out;
    for (const auto& info : experiment_registry()) out += (out.empty() ? "" : ", ") + info.id;
    return out;
}

struct PlanErrors {
    std::vector<std::string> errors;
    void add(int line, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ": " + msg);
    }
};

SampleMode parse_mode(const std::string& v) {
    if (v == "exact") return SampleMode::exact();
    if (v.rfind("exact:", 0) == 0)
        return SampleMode::exact(std::stoll(v.substr(6)));
    if (v.rfind("sweeps:", 0) == 0) {
        auto budget = std::stoll(v.substr(7));
        if (budget <= 0) throw Error("sweep budget must be positive");
        return SampleMode::sweeps(budget);
    }
    throw Error("mode must be 'exact', 'exact:<cap>' or 'sweeps:<budget>'");
}

bool parse_onoff(const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw Error("expected on/off");
}

// apply one key=value to a config; throws on unknown key or bad value
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto positive = [&](double v, const char* name) {
        if (v <= 0) throw Error(std::string(name) + " must be positive");
        return v;
    };
    if (key == "lattice") {
        auto names = LatticeSpec::preset_names();
        if (std::find(names.begin(), names.end(), value) == names.end())
            throw Error("unknown lattice '" + value + "'");
        cfg.lattice = value;
    } else if (key == "model") {
        if (value != "ferro" && value != "staggered" && value != "hardcore")
            throw Error("model must be ferro, staggered or hardcore");
        cfg.model = value;
    } else if (key == "beta") {
        cfg.beta = std::stod(value);
        if (cfg.beta <= 0 && !cfg.force)
            throw Error("beta must be positive (or set force=on for controls)");
    } else if (key == "h") {
        cfg.h = std::stod(value);
    } else if (key == "lambda") {
        cfg.lambda = positive(std::stod(value), "lambda");
    } else if (key == "L") {
        cfg.L_list.clear();
        for (const auto& tok : split(value, ',')) {
            auto L = std::stoll(tok);
            if (L < 2) throw Error("L must be at least 2");
            cfg.L_list.push_back(L);
        }
        if (cfg.L_list.empty()) throw Error("L list is empty");
    } else if (key == "samples") {
        auto n = std::stoll(value);
        if (n < 0) throw Error("samples must be nonnegative");
        cfg.samples = std::size_t(n);
    } else if (key == "seed") {
        cfg.seed = std::stoull(value);
    } else if (key == "mode") {
        cfg.mode = parse_mode(value);
    } else if (key == "threads") {
        cfg.threads = std::max(1, int(std::stol(value)));
    } else if (key == "force") {
        cfg.force = parse_onoff(value);
    } else if (key == "k_sigma") {
        cfg.k_sigma = positive(std::stod(value), "k_sigma");
    } else if (key == "core_radius") {
        cfg.core_radius = positive(double(std::stoll(value)), "core_radius");
    } else if (key == "dup_core_radius") {
        cfg.dup_core_radius = positive(double(std::stoll(value)), "dup_core_radius");
    } else if (key == "semicircuit_radius") {
        cfg.semicircuit_radius = positive(double(std::stoll(value)), "semicircuit_radius");
    } else if (key == "semicircuit_samples") {
        cfg.semicircuit_samples = std::size_t(std::stoll(value));
    } else if (key == "theta_L") {
        cfg.theta_L = positive(double(std::stoll(value)), "theta_L");
    } else if (key == "theta_samples") {
        cfg.theta_samples = std::size_t(std::stoll(value));
    } else if (key == "plus_sea_ceiling") {
        cfg.plus_sea_ceiling = std::stod(value);
    } else if (key == "coexist_ceiling") {
        cfg.coexist_ceiling = std::stod(value);
    } else if (key == "butterfly_floor_any") {
        cfg.butterfly_floor_any = std::stod(value);
    } else if (key == "butterfly_floor_both") {
        cfg.butterfly_floor_both = std::stod(value);
    } else if (key == "crossing_floor") {
        cfg.crossing_floor = std::stod(value);
    } else if (key == "control_tv_ceiling") {
        cfg.control_tv_ceiling = std::stod(value);
    } else if (key == "pattern_w") {
        cfg.pattern_w = positive(double(std::stoll(value)), "pattern_w");
    } else if (key == "shift_control_plus") {
        cfg.shift_control_plus = parse_onoff(value);
    } else {
        throw Error("unknown key '" + key + "'");
    }
}

}  // namespace

RunPlan parse_plan_text(const std::string& text) {
    RunPlan plan;
    PlanErrors errs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool experiments_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.rfind("override", 0) == 0) {
            std::istringstream ls(line);
            std::string kw, exp;
            ls >> kw >> exp;
            if (!valid_experiment(exp)) {
                errs.add(lineno, "unknown experiment id '" + exp + "'; valid ids: " + valid_ids());
                continue;
            }
            std::string item;
            while (ls >> item) {
                auto eq = item.find('=');
                if (eq == std::string::npos) {
                    errs.add(lineno, "override items must be key=value");
                    continue;
                }
                auto key = item.substr(0, eq), value = item.substr(eq + 1);
                try {  // validate against a scratch config
                    RunConfig scratch = plan.base;
                    scratch.force = true;
                    apply_key(scratch, key, value);
                } catch (const std::exception& e) {
                    errs.add(lineno, "override " + exp + "." + key + ": " + e.what());
                    continue;
                }
                plan.overrides[exp][key] = value;
            }
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.add(lineno, "expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "experiments") {
            experiments_seen = true;
            plan.experiments.clear();
            if (value == "all") continue;
            for (const auto& id : split(value, ',')) {
                if (!valid_experiment(id))
                    errs.add(lineno, "unknown experiment id '" + id + "'; valid ids: " + valid_ids());
                else
                    plan.experiments.push_back(id);
            }
        } else if (key == "out") {
            plan.outdir = value;
        } else if (key == "snapshot") {
            try {
                plan.snapshots = parse_onoff(value);
            } catch (const std::exception& e) {
                errs.add(lineno, std::string("snapshot: ") + e.what());
            }
        } else {
            try {
                apply_key(plan.base, key, value);
            } catch (const std::exception& e) {
                errs.add(lineno, key + ": " + e.what());
            }
        }
    }
    (void)experiments_seen;
    if (!errs.errors.empty()) {
        std::string all = "invalid plan:";
        for (const auto& e : errs.errors) all += "\n  " + e;
        throw Error(all);
    }
    return plan;
}

RunPlan parse_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open plan file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_plan_text(buf.str());
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::string results_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream os;
    os << "# perc2d results v1\n";
    os << "experiment,lattice,model,params,L,n,metric,mode,estimate,ci_lo,ci_hi,bound,"
          "bound_formula,verdict,seed,notes\n";
    for (const auto& r : results)
        for (const auto& row : r.rows) {
            os << r.id << ',' << r.lattice << ',' << r.model << ',' << csv_quote(r.params) << ','
               << row.L << ',' << row.n << ',' << row.metric << ',' << r.mode << ','
               << fmt(row.estimate) << ',' << fmt(row.ci.lo) << ',' << fmt(row.ci.hi) << ','
               << fmt(row.bound) << ',' << csv_quote(row.bound_formula) << ',' << row.verdict
               << ',' << r.seed << ',' << csv_quote(r.notes) << '\n';
        }
    return os.str();
}

std::string results_summary(const std::vector<ExperimentResult>& results) {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& r : results) {
        os << r.id << " [" << r.model << " " << r.params << " on " << r.lattice
           << ", mode " << r.mode << "]: " << r.verdict << "\n";
        for (const auto& row : r.rows) {
            os << "  L=" << row.L << " " << row.metric << " = " << fmt(row.estimate) << " ["
               << fmt(row.ci.lo) << ", " << fmt(row.ci.hi) << "]";
            if (!std::isnan(row.bound))
                os << "  vs " << row.bound_formula << " = " << fmt(row.bound);
            os << "\n";
        }
        if (!r.notes.empty()) os << "  note: " << r.notes << "\n";
        passed += r.passed();
    }
    os << passed << "/" << results.size() << " experiments passed\n";
    return os.str();
}

std::vector<ExperimentResult> execute_plan_results(const RunPlan& plan) {
    std::vector<std::string> selected = plan.experiments;
    if (selected.empty())
        for (const auto& info : experiment_registry()) selected.push_back(info.id);

    // group runs by their effective configuration so contexts are shared
    std::vector<ExperimentResult> results;
    std::map<std::string, std::shared_ptr<ExperimentContext>> contexts;
    for (const auto& id : selected) {
        RunConfig cfg = plan.base;
        auto ov = plan.overrides.find(id);
        std::string key = "base";
        if (ov != plan.overrides.end()) {
            cfg.force = true;  // overrides may set control parameters like beta=0
            key.clear();
            for (const auto& [k, v] : ov->second) {
                apply_key(cfg, k, v);
                key += k + "=" + v + ";";
            }
        }
        auto [it, fresh] = contexts.try_emplace(key, nullptr);
        if (fresh) it->second = std::make_shared<ExperimentContext>(make_context(cfg));
        ExperimentContext& ctx = *it->second;
        results.push_back(run_experiment(ctx, id));
    }
    return results;
}

int execute(const RunPlan& plan) {
    namespace fs = std::filesystem;
    try {
        auto results = execute_plan_results(plan);

        std::string outdir = plan.outdir;
        if (const char* env = std::getenv("PERC2D_OUT")) outdir = env;
        fs::create_directories(outdir);

        auto write_atomic = [&](const std::string& name, const std::string& content) {
            fs::path tmp = fs::path(outdir) / (name + ".tmp");
            fs::path final_path = fs::path(outdir) / name;
            std::ofstream f(tmp, std::ios::binary);
            if (!f) throw Error("cannot write " + tmp.string());
            f << content;
            f.close();
            fs::rename(tmp, final_path);
        };
        write_atomic("results.csv", results_csv(results));
        write_atomic("summary.txt", results_summary(results));

        if (plan.snapshots) {
            fs::create_directories(fs::path(outdir) / "snapshots");
            for (const auto& r : results) {
                RunConfig cfg = plan.base;
                auto ov = plan.overrides.find(r.id);
                if (ov != plan.overrides.end()) {
                    cfg.force = true;
                    for (const auto& [k, v] : ov->second) apply_key(cfg, k, v);
                }
                auto ctx = make_context(cfg);
                std::int64_t L = cfg.L_list.back();
                Window w = Window::rect(ctx.graph(), Rect::box(L));
                bool dobr = r.id == "duplicated_circuit" || r.id == "interface_fluctuation" ||
                            r.id == "shift_invariance" || r.id == "point_to_semicircuit";
                BoundaryCondition bc =
                    dobr ? make_dobrushin_bc(ctx.graph(), Side::up, 0) : BoundaryCondition::plus();
                std::uint64_t snap_seed = rng::mix(cfg.seed ^ 0x5eedf00dull);
                auto batch = sample_batch(ctx.spin_model, ctx.tables, ctx.graph(), w, bc, 1,
                                          cfg.mode, snap_seed, cfg.threads);
                std::vector<Point> overlay;
                if (dobr) {
                    auto oi = open_interface(batch[0]);
                    if (oi.contour) overlay = contour_dual_points(ctx.graph(), *oi.contour);
                }
                std::ofstream f(fs::path(outdir) / "snapshots" / (r.id + ".pgm"),
                                std::ios::binary);
                f << to_pgm(batch[0], overlay);
            }
        }

        for (const auto& r : results)
            if (!r.passed()) return 1;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

std::string list_registry() {
    std::ostringstream os;
    for (const auto& info : experiment_registry())
        os << info.id << " - " << info.description << "\n";
    os << "suite - run all of the above in order\n";
    return os.str();
}

}  // namespace perc
