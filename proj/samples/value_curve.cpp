// Prints V(y; a, b) and L(y; a, b) over a grid of initial surplus levels for
// a Brownian surplus with drift 1 and volatility 2.

#include <cstdio>
#include <string>

#include "ratchet_levy.hpp"

int main()
{
    using namespace ratchet_levy;
    const LevyModel model = LevyModel::brownian(1.0, 2.0);
    const Strategy strategy{3.0, 5.0, 0.0, 0.1, 1.0};
    const double delta = 0.05;

    const Valuator value(model, strategy, delta);
    const RuinEvaluator ruin(model, strategy, delta);
    std::printf("%6s %8s %12s %12s\n", "y", "region", "V", "L");
    for (int i = 0; i <= 20; ++i) {
        const double y = 0.5 * i;
        const auto v = value.value(y);
        std::printf("%6.2f %8s %12.6f %12.6f\n", y, std::string(to_string(v.region)).c_str(), v.value,
                    ruin(y).value);
    }
    std::printf("periodic barrier only (b = inf): V(8) = %.6f\n", value_no_ratchet(model, 3.0, 0.0, 1.0, delta, 8.0));
    std::printf("ratchet only (gamma = 0):        V(8) = %.6f\n", value_ratchet_only(model, 5.0, 0.0, 0.1, delta, 8.0));
}
