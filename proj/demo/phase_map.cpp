// Sweeps the mean-field steady state over interaction strength and coupling
// and draws the superradiant region as a character map: '#' where the
// cavity holds a macroscopic field, '.' where it stays empty.

#include <dicke/meanfield.hpp>

#include <cstdio>
#include <vector>

int main() {
    using namespace dicke;

    model::ModelSpec spec;
    std::vector<double> inv_vs, gs;
    for (int i = 0; i <= 40; ++i) inv_vs.push_back(-6.0 + i * (5.9 / 40.0));
    for (int i = 0; i <= 24; ++i) gs.push_back(i * (0.48 / 24.0));

    const auto grid = mf::sweep_phase_diagram(
        [&](double inv_v) {
            return mf::full_problem(
                [&] {
                    model::ModelSpec s = spec;
                    s.interaction = model::ConstantDipole{1.0 / inv_v};
                    return s;
                }());
        },
        inv_vs, gs);

    std::printf("Superradiant region over (1/v_dd, G), six atoms:\n\n");
    for (std::size_t ig = gs.size(); ig-- > 0;) {
        std::printf("G=%4.2f |", gs[ig]);
        for (std::size_t ix = 0; ix < inv_vs.size(); ++ix)
            std::putchar(grid.superradiant(ix, ig) ? '#' : '.');
        std::putchar('\n');
    }
    std::printf("       +");
    for (std::size_t ix = 0; ix < inv_vs.size(); ++ix) std::putchar('-');
    std::printf("\n        1/v_dd from %.1f to %.1f; funnels reach G = 0 at -5, -3, -1\n",
                inv_vs.front(), inv_vs.back());
    return 0;
}
