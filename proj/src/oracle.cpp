#include "hjb/oracle.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hjb::oracle {

Enumeration enumerate(const ControlProblem& p) {
    if (p.sense() != Sense::min) throw ParameterError("oracle expects a min-sense problem");
    const std::size_t n = p.size();
    const std::size_t controls = p.num_controls();

    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > kMaxAssignments / controls)
            throw ParameterError("oracle: " + std::to_string(controls) + "^" + std::to_string(n) +
                                 " assignments exceed the enumeration limit");
        total *= controls;
    }

    Enumeration result;
    std::vector<std::size_t> choice(n, 0);
    bool found = false;
    for (std::size_t k = 0; k < total; ++k) {
        ++result.assignments;
        BandedMatrix spliced = row_splice(p.matrices(), choice);
        Vector rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = p.rhs(choice[i])[i];

        try {
            Vector x = solve(spliced, rhs);
            if (verify_solution(p, x, kVerifyTol)) {
                ++result.verifying;
                if (!found) {
                    result.x = std::move(x);
                    found = true;
                } else {
                    double d = 0.0;
                    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - result.x[i]));
                    result.spread = std::max(result.spread, d);
                }
            }
        } catch (const SingularPivotError&) {
            // A singular splice cannot carry the solution; skip it.
        }

        // odometer increment
        for (std::size_t i = 0; i < n; ++i) {
            if (++choice[i] < controls) break;
            choice[i] = 0;
        }
    }
    return result;
}

Vector brute_force_solve(const ControlProblem& p) {
    auto e = enumerate(p);
    if (e.verifying == 0)
        throw OracleError("oracle: no control assignment yields a verified solution");
    if (e.spread > kVerifyTol)
        throw OracleError("oracle: verified candidates differ by " + std::to_string(e.spread));
    return e.x;
}

ControlProblem random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
    std::uniform_int_distribution<std::size_t> n_dist(shape.min_n, shape.max_n);
    std::uniform_int_distribution<std::size_t> s_dist(shape.min_controls, shape.max_controls);
    std::uniform_real_distribution<double> off(-1.0, 0.0);
    std::uniform_real_distribution<double> margin(0.05, 1.0);
    std::uniform_real_distribution<double> data(-1.0, 1.0);

    const std::size_t n = n_dist(rng);
    const std::size_t controls = s_dist(rng);

    std::vector<std::string> labels;
    std::vector<BandedMatrix> matrices;
    std::vector<Vector> rhs;
    for (std::size_t s = 0; s < controls; ++s) {
        Vector lower(n - 1);
        Vector upper(n - 1);
        Vector diag(n);
        for (auto& v : lower) v = off(rng);
        for (auto& v : upper) v = off(rng);
        for (std::size_t i = 0; i < n; ++i) {
            double d = margin(rng);
            if (i > 0) d -= lower[i - 1];
            if (i + 1 < n) d -= upper[i];
            diag[i] = d;
        }
        Vector b(n);
        for (auto& v : b) v = data(rng);
        labels.push_back("s" + std::to_string(s));
        matrices.emplace_back(std::move(lower), std::move(diag), std::move(upper));
        rhs.push_back(std::move(b));
    }
    return ControlProblem(std::move(labels), std::move(matrices), std::move(rhs));
}

std::string describe(const ControlProblem& p) {
    std::ostringstream out;
    out.precision(17);
    auto list = [&out](std::span<const double> v) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
        out << ']';
    };
    out << "N = " << p.size() << ", controls = " << p.num_controls()
        << ", sense = " << (p.sense() == Sense::min ? "min" : "max") << '\n';
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        const auto& a = p.matrix(s);
        out << "control " << s << " '" << p.label(s) << "'\n  lower = ";
        list(a.lower());
        out << "\n  diag  = ";
        list(a.diag());
        out << "\n  upper = ";
        list(a.upper());
        out << "\n  b     = ";
        list(p.rhs(s));
        out << '\n';
    }
    return out.str();
}

}  // namespace hjb::oracle
