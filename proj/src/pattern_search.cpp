#include "wakefc/pattern_search.hpp"

#include "wakefc/error.hpp"

#include <algorithm>
#include <cmath>

namespace wakefc {

namespace {

struct Scored {
    Evaluation eval;
    double score = 0.0;
};

} // namespace

PatternSearchResult pattern_search(const ConstrainedObjective& objective, std::span<const double> x0,
                                   std::span<const double> lower, std::span<const double> upper,
                                   const PatternSearchOptions& opt)
{
    const std::size_t dim = x0.size();
    if (lower.size() != dim || upper.size() != dim) {
        throw DomainError("pattern_search: bound dimensions do not match the start point");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(lower[i] <= x0[i] && x0[i] <= upper[i])) {
            throw DomainError("pattern_search: start point outside bounds");
        }
    }
    if (!(opt.initial_mesh > 0.0 && opt.mesh_tolerance > 0.0 && opt.expansion >= 1.0 && opt.contraction > 0.0
          && opt.contraction < 1.0)) {
        throw DomainError("pattern_search: invalid mesh options");
    }

    PatternSearchResult res;
    const auto evaluate = [&](std::span<const double> x) {
        ++res.evaluations;
        Scored s;
        s.eval = objective(x);
        s.score = s.eval.value - opt.penalty * s.eval.violation;
        return s;
    };

    std::vector<double> x(x0.begin(), x0.end());
    Scored cur = evaluate(x);
    if (!std::isfinite(cur.eval.value)) {
        throw DomainError("pattern_search: objective not finite at the start point");
    }

    std::vector<double> best_feasible;
    Evaluation best_feasible_eval;
    const auto note_feasible = [&](const std::vector<double>& p, const Evaluation& e) {
        if (e.violation <= 0.0 && std::isfinite(e.value)
            && (best_feasible.empty() || e.value > best_feasible_eval.value)) {
            best_feasible = p;
            best_feasible_eval = e;
        }
    };
    note_feasible(x, cur.eval);

    double mesh = opt.initial_mesh;
    std::vector<double> trial(dim);
    std::vector<double> best_trial(dim);
    while (mesh >= opt.mesh_tolerance) {
        if (res.evaluations >= opt.max_evaluations) {
            res.budget_exhausted = true;
            break;
        }
        ++res.iterations;
        bool improved = false;
        Scored best_poll = cur;
        for (std::size_t d = 0; d < 2 * dim && res.evaluations < opt.max_evaluations; ++d) {
            const std::size_t axis = d / 2;
            const double step = (d % 2 == 0) ? mesh : -mesh;
            trial = x;
            trial[axis] = std::clamp(x[axis] + step, lower[axis], upper[axis]);
            if (trial[axis] == x[axis]) {
                continue;
            }
            const Scored s = evaluate(trial);
            if (!std::isfinite(s.score)) {
                continue;
            }
            note_feasible(trial, s.eval);
            // Strict comparison keeps the earliest direction on ties.
            if (s.score > best_poll.score) {
                best_poll = s;
                best_trial = trial;
                improved = true;
                if (opt.poll == PollOrder::opportunistic) {
                    break;
                }
            }
        }
        if (improved) {
            x = best_trial;
            cur = best_poll;
            mesh *= opt.expansion;
        } else {
            mesh *= opt.contraction;
        }
    }

    res.final_mesh = mesh;
    if (!best_feasible.empty()) {
        res.x = std::move(best_feasible);
        res.value = best_feasible_eval.value;
        res.violation = 0.0;
        res.feasible = true;
    } else {
        res.x = std::move(x);
        res.value = cur.eval.value;
        res.violation = cur.eval.violation;
        res.feasible = false;
    }
    return res;
}

PatternSearchResult pattern_search(const Objective& objective, std::span<const double> x0,
                                   std::span<const double> lower, std::span<const double> upper,
                                   const PatternSearchOptions& options)
{
    const ConstrainedObjective wrapped = [&objective](std::span<const double> x) {
        return Evaluation{objective(x), 0.0};
    };
    return pattern_search(wrapped, x0, lower, upper, options);
}

} // namespace wakefc
