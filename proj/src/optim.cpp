#include "orbo/optim.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace orbo {

NelderMeadResult nelder_mead_minimize(const ScalarObjective& f, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& initial_step, int max_evals) {
    const int n = static_cast<int>(x0.size());
    constexpr double reflect = 1.0;
    constexpr double expand = 2.0;
    constexpr double contract = 0.5;
    constexpr double shrink = 0.5;

    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };

    std::vector<Eigen::VectorXd> simplex(n + 1, x0);
    std::vector<double> value(n + 1);
    for (int i = 0; i < n; ++i) simplex[i + 1](i) += initial_step(i);
    for (int i = 0; i <= n; ++i) value[i] = eval(simplex[i]);

    std::vector<int> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    auto sort_simplex = [&] {
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return value[a] < value[b]; });
    };

    while (evals < max_evals) {
        sort_simplex();
        const int best = order[0];
        const int worst = order[n];
        const int second_worst = order[n - 1];

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += simplex[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + reflect * (centroid - simplex[worst]);
        const double fr = eval(xr);
        if (fr < value[best]) {
            Eigen::VectorXd xe = centroid + expand * (xr - centroid);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                value[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                value[worst] = fr;
            }
        } else if (fr < value[second_worst]) {
            simplex[worst] = std::move(xr);
            value[worst] = fr;
        } else {
            const bool outside = fr < value[worst];
            Eigen::VectorXd xc;
            if (outside) {
                xc = centroid + contract * (xr - centroid);
            } else {
                xc = centroid - contract * (centroid - simplex[worst]);
            }
            const double fc = eval(xc);
            if (fc < std::min(fr, value[worst])) {
                simplex[worst] = std::move(xc);
                value[worst] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    const int idx = order[i];
                    simplex[idx] = simplex[order[0]] + shrink * (simplex[idx] - simplex[order[0]]);
                    value[idx] = eval(simplex[idx]);
                }
            }
        }
    }

    sort_simplex();
    return NelderMeadResult{simplex[order[0]], value[order[0]], evals};
}

}  // namespace orbo
