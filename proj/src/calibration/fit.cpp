#include "crowdkit/calibration/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "crowdkit/common/rng.hpp"
#include "crowdkit/common/textio.hpp"

namespace crowdkit {

namespace {

const double kFailedObjective = 1e30;

std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (population < 4) throw std::invalid_argument("OptimizerConfig: population must be >= 4");
    if (generations < 1) throw std::invalid_argument("OptimizerConfig: generations must be >= 1");
    if (tournament < 1 || tournament > population)
        throw std::invalid_argument("OptimizerConfig: bad tournament size");
    if (!(blend_alpha >= 0.0)) throw std::invalid_argument("OptimizerConfig: bad blend_alpha");
    if (!(mutation_sigma_frac > 0.0))
        throw std::invalid_argument("OptimizerConfig: mutation_sigma_frac must be positive");
    if (elite < 1 || elite >= population)
        throw std::invalid_argument("OptimizerConfig: elite must lie in [1, population)");
    if (nm_max_iters < 0) throw std::invalid_argument("OptimizerConfig: bad nm_max_iters");
    if (!(nm_tol >= 0.0)) throw std::invalid_argument("OptimizerConfig: bad nm_tol");
}

ParamBounds parameter_bounds(Variant variant, const OptimizerConfig& ocfg) {
    ParamBounds b;
    auto add = [&](const std::string& name, double lo, double hi) {
        b.names.push_back(name);
        b.lo.push_back(lo);
        b.hi.push_back(hi);
    };
    if (variant == Variant::A || variant == Variant::B) {
        add("a", 1e-3, 10.0);
        add("b", 1e-3, 3.0);
    } else {
        add("a_n", 1e-3, 10.0);
        add("b_n", 1e-3, 10.0);
        add("c_n", 1e-3, 10.0);
        add("a_p", 1e-3, 10.0);
        add("b_p", 1e-3, 10.0);
        add("c_p", 1e-3, 10.0);
    }
    if (ocfg.fit_tau) add("tau", 0.2, 1.2);
    if (ocfg.fit_lambda && variant != Variant::C) add("lambda", 0.0, 1.0);
    return b;
}

void apply_parameter_vector(const std::vector<double>& x, const ParamBounds& bounds,
                            ModelParams* params, ObjectiveConfig* cfg) {
    if (x.size() != bounds.size())
        throw std::invalid_argument("apply_parameter_vector: dimension mismatch");
    for (std::size_t k = 0; k < x.size(); ++k) {
        const std::string& n = bounds.names[k];
        const double v = x[k];
        if (n == "a") params->a = v;
        else if (n == "b") params->b = v;
        else if (n == "a_n") params->a_n = v;
        else if (n == "b_n") params->b_n = v;
        else if (n == "c_n") params->c_n = v;
        else if (n == "a_p") params->a_p = v;
        else if (n == "b_p") params->b_p = v;
        else if (n == "c_p") params->c_p = v;
        else if (n == "tau") cfg->relaxation_time = v;
        else if (n == "lambda") params->lambda = v;
        else throw std::logic_error("apply_parameter_vector: unknown name '" + n + "'");
    }
}

std::vector<double> extract_parameter_vector(const ParamBounds& bounds, const ModelParams& params,
                                             const ObjectiveConfig& cfg) {
    std::vector<double> x;
    for (const auto& n : bounds.names) {
        if (n == "a") x.push_back(params.a);
        else if (n == "b") x.push_back(params.b);
        else if (n == "a_n") x.push_back(params.a_n);
        else if (n == "b_n") x.push_back(params.b_n);
        else if (n == "c_n") x.push_back(params.c_n);
        else if (n == "a_p") x.push_back(params.a_p);
        else if (n == "b_p") x.push_back(params.b_p);
        else if (n == "c_p") x.push_back(params.c_p);
        else if (n == "tau") x.push_back(cfg.relaxation_time);
        else if (n == "lambda") x.push_back(params.lambda);
        else throw std::logic_error("extract_parameter_vector: unknown name '" + n + "'");
    }
    return x;
}

namespace {

std::vector<double> clamp_to_bounds(std::vector<double> x, const ParamBounds& b) {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], b.lo[k], b.hi[k]);
    return x;
}

}  // namespace

std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
    const ParamBounds& bounds, int max_iters, double tol) {
    const std::size_t n = x0.size();
    if (n == 0 || n != bounds.size()) throw std::invalid_argument("nelder_mead: bad dimensions");

    std::vector<double> best_x = clamp_to_bounds(x0, bounds);
    double best_f = f(best_x);
    auto eval = [&](const std::vector<double>& raw) {
        const auto x = clamp_to_bounds(raw, bounds);
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
        return v;
    };

    // Initial simplex: x0 displaced 5% of each range per axis, flipped
    // downward when that would leave the box.
    std::vector<std::vector<double>> simplex{best_x};
    for (std::size_t k = 0; k < n; ++k) {
        auto v = best_x;
        const double delta = 0.05 * (bounds.hi[k] - bounds.lo[k]);
        v[k] = v[k] + delta <= bounds.hi[k] ? v[k] + delta : v[k] - delta;
        simplex.push_back(v);
    }
    std::vector<double> fv(simplex.size());
    fv[0] = best_f;
    for (std::size_t i = 1; i < simplex.size(); ++i) fv[i] = eval(simplex[i]);

    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<std::size_t> order(simplex.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> sorted;
        std::vector<double> fs;
        for (auto idx : order) {
            sorted.push_back(simplex[idx]);
            fs.push_back(fv[idx]);
        }
        simplex = std::move(sorted);
        fv = std::move(fs);

        if (fv.back() - fv.front() <= tol * (std::abs(fv.front()) + 1e-12)) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k];
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k)
                x[k] = centroid[k] + coef * (simplex.back()[k] - centroid[k]);
            return x;
        };

        const auto reflected = blend(-1.0);
        const double fr = eval(reflected);
        if (fr < fv.front()) {
            const auto expanded = blend(-2.0);
            const double fe = eval(expanded);
            if (fe < fr) {
                simplex.back() = expanded;
                fv.back() = fe;
            } else {
                simplex.back() = reflected;
                fv.back() = fr;
            }
            continue;
        }
        if (fr < fv[fv.size() - 2]) {
            simplex.back() = reflected;
            fv.back() = fr;
            continue;
        }
        const auto contracted = blend(fr < fv.back() ? -0.5 : 0.5);
        const double fc = eval(contracted);
        if (fc < std::min(fr, fv.back())) {
            simplex.back() = contracted;
            fv.back() = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (std::size_t k = 0; k < n; ++k)
                simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
            fv[i] = eval(simplex[i]);
        }
    }
    return {best_x, best_f};
}

FitResult fit_model(const std::vector<ReplayTask>& calibration,
                    const std::vector<ReplayTask>& validation, Variant variant,
                    const OptimizerConfig& ocfg, const ObjectiveConfig& ccfg, std::uint64_t seed) {
    ocfg.validate();
    ccfg.validate();
    if (calibration.empty()) throw std::invalid_argument("fit_model: no calibration tasks");

    const ParamBounds bounds = parameter_bounds(variant, ocfg);
    const std::size_t dim = bounds.size();

    ModelParams base;
    base.variant = variant;

    auto objective = [&](const std::vector<double>& x) {
        ModelParams p = base;
        ObjectiveConfig c = ccfg;
        apply_parameter_vector(x, bounds, &p, &c);
        try {
            return similarity(calibration, p, c, nullptr);
        } catch (const std::exception&) {
            return kFailedObjective;
        }
    };

    Rng rng(derive_seed(seed, "calibration-ga"));

    std::vector<std::vector<double>> pop(ocfg.population);
    std::vector<double> fitness(ocfg.population);
    for (int i = 0; i < ocfg.population; ++i) {
        std::vector<double> x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = rng.uniform(bounds.lo[k], bounds.hi[k]);
        pop[i] = std::move(x);
        fitness[i] = objective(pop[i]);
    }

    auto best_index = [&]() {
        return static_cast<std::size_t>(
            std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    };
    const double initial_best = fitness[best_index()];

    FitResult result;
    result.variant = variant;
    result.seed = seed;
    result.optimizer = ocfg;
    result.objective = ccfg;
    result.calibration_task_count = static_cast<int>(calibration.size());
    result.validation_task_count = static_cast<int>(validation.size());
    result.trace.push_back(initial_best);

    auto tournament_pick = [&]() {
        std::size_t best = rng.uniform_index(static_cast<std::uint64_t>(ocfg.population));
        for (int k = 1; k < ocfg.tournament; ++k) {
            const std::size_t cand = rng.uniform_index(static_cast<std::uint64_t>(ocfg.population));
            if (fitness[cand] < fitness[best]) best = cand;
        }
        return best;
    };

    for (int gen = 0; gen < ocfg.generations; ++gen) {
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

        std::vector<std::vector<double>> next;
        std::vector<double> next_fitness;
        next.reserve(pop.size());
        for (int e = 0; e < ocfg.elite; ++e) {
            next.push_back(pop[order[e]]);
            next_fitness.push_back(fitness[order[e]]);
        }
        while (next.size() < pop.size()) {
            const auto& p1 = pop[tournament_pick()];
            const auto& p2 = pop[tournament_pick()];
            std::vector<double> child(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                const double lo = std::min(p1[k], p2[k]);
                const double hi = std::max(p1[k], p2[k]);
                const double span = hi - lo;
                double v = rng.uniform(lo - ocfg.blend_alpha * span, hi + ocfg.blend_alpha * span);
                v += ocfg.mutation_sigma_frac * (bounds.hi[k] - bounds.lo[k]) * rng.normal();
                child[k] = std::clamp(v, bounds.lo[k], bounds.hi[k]);
            }
            next_fitness.push_back(objective(child));
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        fitness = std::move(next_fitness);
        result.trace.push_back(fitness[best_index()]);
    }

    const std::size_t bi = best_index();
    if (fitness[bi] >= kFailedObjective)
        throw std::runtime_error("fit_model: objective failed for every candidate evaluated");

    auto [refined, refined_value] =
        nelder_mead(objective, pop[bi], bounds, ocfg.nm_max_iters, ocfg.nm_tol);
    if (refined_value > fitness[bi]) {  // best-seen tracking makes this impossible
        refined = pop[bi];
        refined_value = fitness[bi];
    }

    ModelParams fitted = base;
    ObjectiveConfig fitted_cfg = ccfg;
    apply_parameter_vector(refined, bounds, &fitted, &fitted_cfg);
    result.params = fitted;
    result.objective = fitted_cfg;
    result.relaxation_time = fitted_cfg.relaxation_time;

    std::vector<TaskOutcome> cal_outcomes;
    result.s_cal = similarity(calibration, fitted, fitted_cfg, &cal_outcomes);
    for (const auto& o : cal_outcomes)
        if (!o.ok) ++result.failed_calibration_tasks;

    if (!validation.empty()) {
        std::vector<TaskOutcome> val_outcomes;
        result.s_val = similarity(validation, fitted, fitted_cfg, &val_outcomes);
        for (const auto& o : val_outcomes)
            if (!o.ok) ++result.failed_validation_tasks;
    }

    if (refined_value >= initial_best - 1e-15)
        result.warning = "optimizer budget spent without improving on the initial population";
    return result;
}

std::pair<TrajectorySet, TrajectorySet> split_dataset(const TrajectorySet& set, double ratio,
                                                      std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split_dataset: ratio must lie in (0, 1)");
    const std::size_t n = set.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, "dataset-split"));
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        std::swap(idx[i - 1], idx[j]);
    }
    const std::size_t k =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    std::vector<std::size_t> first(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)));
    std::vector<std::size_t> second(idx.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)), idx.end());
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());

    TrajectorySet cal(set.frame_rate()), val(set.frame_rate());
    for (auto i : first) cal.add(set[i]);
    for (auto i : second) val.add(set[i]);
    return {std::move(cal), std::move(val)};
}

std::string fit_result_text(const FitResult& fit) {
    std::ostringstream os;
    os << "variant = " << variant_name(fit.variant) << "\n";
    const OptimizerConfig& o = fit.optimizer;
    ParamBounds bounds = parameter_bounds(fit.variant, o);
    ModelParams p = fit.params;
    ObjectiveConfig c = fit.objective;
    c.relaxation_time = fit.relaxation_time;
    const auto x = extract_parameter_vector(bounds, p, c);
    for (std::size_t k = 0; k < bounds.size(); ++k)
        os << "param " << bounds.names[k] << " = " << fmt_exact(x[k]) << "\n";
    os << "tau = " << fmt_exact(fit.relaxation_time) << "\n";
    os << "lambda = " << fmt_exact(fit.params.lambda) << "\n";
    os << "s_cal = " << fmt_exact(fit.s_cal) << "\n";
    os << "s_val = " << fmt_exact(fit.s_val) << "\n";
    os << "seed = " << fit.seed << "\n";
    os << "calibration_tasks = " << fit.calibration_task_count << "\n";
    os << "validation_tasks = " << fit.validation_task_count << "\n";
    os << "failed_calibration_tasks = " << fit.failed_calibration_tasks << "\n";
    os << "failed_validation_tasks = " << fit.failed_validation_tasks << "\n";
    os << "population = " << o.population << "\n";
    os << "generations = " << o.generations << "\n";
    os << "tournament = " << o.tournament << "\n";
    os << "blend_alpha = " << fmt_double(o.blend_alpha) << "\n";
    os << "mutation_sigma_frac = " << fmt_double(o.mutation_sigma_frac) << "\n";
    os << "elite = " << o.elite << "\n";
    os << "nm_max_iters = " << o.nm_max_iters << "\n";
    os << "nm_tol = " << fmt_double(o.nm_tol) << "\n";
    os << "fit_tau = " << (o.fit_tau ? 1 : 0) << "\n";
    os << "fit_lambda = " << (o.fit_lambda ? 1 : 0) << "\n";
    os << "desired_speed_percentile = " << fmt_double(fit.objective.desired_speed_percentile)
       << "\n";
    os << "penalty_enabled = " << (fit.objective.penalty_enabled ? 1 : 0) << "\n";
    os << "alt_penalty_sign = " << (fit.objective.alt_penalty_sign ? 1 : 0) << "\n";
    os << "flip_exponent_sign = " << (fit.params.flip_exponent_sign ? 1 : 0) << "\n";
    os << "split_ratio = " << fmt_exact(fit.objective.split_ratio) << "\n";
    os << "radius = " << fmt_exact(fit.objective.radius) << "\n";
    os << "max_co_ped_gap = " << fmt_double(fit.objective.max_co_ped_gap) << "\n";
    if (!fit.warning.empty()) os << "warning = " << fit.warning << "\n";
    for (std::size_t g = 0; g < fit.trace.size(); ++g)
        os << "trace " << g << ' ' << fmt_exact(fit.trace[g]) << "\n";
    return os.str();
}

FitResult fit_result_from_lines(const std::vector<std::string>& lines) {
    FitResult fit;
    ModelParams params;
    ObjectiveConfig cfg;
    OptimizerConfig opt;
    bool have_variant = false;
    std::vector<std::pair<std::string, double>> param_values;

    for (const auto& raw : lines) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("trace ", 0) == 0) {
            const auto tokens = split_ws(line);
            if (tokens.size() != 3) throw std::runtime_error("fit result: bad trace line");
            fit.trace.push_back(parse_double(tokens[2]));
            continue;
        }
        if (line.rfind("param ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw std::runtime_error("fit result: bad param line");
            param_values.emplace_back(trim(line.substr(6, eq - 6)),
                                      parse_double(trim(line.substr(eq + 1))));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("fit result: expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "variant") {
            fit.variant = variant_from_name(value);
            have_variant = true;
        } else if (key == "tau") fit.relaxation_time = parse_double(value);
        else if (key == "lambda") params.lambda = parse_double(value);
        else if (key == "s_cal") fit.s_cal = parse_double(value);
        else if (key == "s_val") fit.s_val = parse_double(value);
        else if (key == "seed") fit.seed = static_cast<std::uint64_t>(parse_long(value));
        else if (key == "calibration_tasks") fit.calibration_task_count = static_cast<int>(parse_long(value));
        else if (key == "validation_tasks") fit.validation_task_count = static_cast<int>(parse_long(value));
        else if (key == "failed_calibration_tasks") fit.failed_calibration_tasks = static_cast<int>(parse_long(value));
        else if (key == "failed_validation_tasks") fit.failed_validation_tasks = static_cast<int>(parse_long(value));
        else if (key == "population") opt.population = static_cast<int>(parse_long(value));
        else if (key == "generations") opt.generations = static_cast<int>(parse_long(value));
        else if (key == "tournament") opt.tournament = static_cast<int>(parse_long(value));
        else if (key == "blend_alpha") opt.blend_alpha = parse_double(value);
        else if (key == "mutation_sigma_frac") opt.mutation_sigma_frac = parse_double(value);
        else if (key == "elite") opt.elite = static_cast<int>(parse_long(value));
        else if (key == "nm_max_iters") opt.nm_max_iters = static_cast<int>(parse_long(value));
        else if (key == "nm_tol") opt.nm_tol = parse_double(value);
        else if (key == "fit_tau") opt.fit_tau = parse_long(value) != 0;
        else if (key == "fit_lambda") opt.fit_lambda = parse_long(value) != 0;
        else if (key == "desired_speed_percentile") cfg.desired_speed_percentile = parse_double(value);
        else if (key == "penalty_enabled") cfg.penalty_enabled = parse_long(value) != 0;
        else if (key == "alt_penalty_sign") cfg.alt_penalty_sign = parse_long(value) != 0;
        else if (key == "flip_exponent_sign") params.flip_exponent_sign = parse_long(value) != 0;
        else if (key == "split_ratio") cfg.split_ratio = parse_double(value);
        else if (key == "radius") cfg.radius = parse_double(value);
        else if (key == "max_co_ped_gap") cfg.max_co_ped_gap = parse_double(value);
        else if (key == "warning") fit.warning = value;
        else throw std::runtime_error("fit result: unknown key '" + key + "'");
    }
    if (!have_variant) throw std::runtime_error("fit result: missing variant");

    params.variant = fit.variant;
    for (const auto& [name, value] : param_values) {
        if (name == "a") params.a = value;
        else if (name == "b") params.b = value;
        else if (name == "a_n") params.a_n = value;
        else if (name == "b_n") params.b_n = value;
        else if (name == "c_n") params.c_n = value;
        else if (name == "a_p") params.a_p = value;
        else if (name == "b_p") params.b_p = value;
        else if (name == "c_p") params.c_p = value;
        else if (name == "tau") fit.relaxation_time = value;
        else if (name == "lambda") params.lambda = value;
        else throw std::runtime_error("fit result: unknown parameter '" + name + "'");
    }
    cfg.relaxation_time = fit.relaxation_time;
    fit.params = params;
    fit.objective = cfg;
    fit.optimizer = opt;
    return fit;
}

FitResult read_fit_result(const std::string& path) {
    try {
        return fit_result_from_lines(read_lines(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_fit_result(const std::string& path, const FitResult& fit) {
    write_text_file(path, fit_result_text(fit));
}

}  // namespace crowdkit
