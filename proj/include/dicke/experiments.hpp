// experiments.hpp — turns a resolved configuration into result tables: one
// table per figure panel (photon/correlation phase diagrams, critical-
// coupling curves, sector-energy levels, dissipative-dynamics curves), plus
// JSON degeneracy-scan reports.  Each table embeds the resolved config so
// outputs are self-describing and re-runs are byte-identical.

#pragma once

#include <dicke/collective.hpp>
#include <dicke/config.hpp>
#include <dicke/hamiltonians.hpp>
#include <dicke/lindblad.hpp>
#include <dicke/meanfield.hpp>
#include <dicke/table.hpp>
#include <dicke/version.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke::exp {

using cfg::json;
using cfg::ResolvedConfig;
using io::ResultTable;

// Thrown when solvers fail beyond the configured tolerance (CLI exit 3):
// too many unconverged cells, or an aborted time evolution.
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunStats {
    std::size_t cells_total = 0;
    std::size_t cells_unconverged = 0;

    double unconverged_fraction() const {
        return cells_total == 0 ? 0.0 : double(cells_unconverged) / double(cells_total);
    }
    void absorb(const mf::PhaseGrid& grid) {
        cells_total += grid.converged.size();
        for (auto c : grid.converged)
            if (!c) ++cells_unconverged;
    }
    // One cell per threshold point.  Probes that stop at the iteration cap
    // right at the superradiance boundary are expected (the fixed-point map
    // is critically slow there) and do not invalidate the bisected result;
    // only a bisection dominated by capped probes is counted as unconverged.
    void absorb(const mf::CriticalCouplingResult& r) {
        cells_total += 1;
        if (r.probes > 0 && 2 * r.unconverged_probes > r.probes) ++cells_unconverged;
    }
};

struct RunReport {
    std::vector<std::string> files;
    RunStats stats;
    double wall_seconds = 0.0;
};

namespace detail {

inline json table_meta(const ResolvedConfig& cfg) {
    return json{{"experiment", cfg.experiment()},
                {"generator", std::string("dicke ") + version_string},
                {"config", cfg.raw()}};
}

inline model::ModelSpec spec_with(model::ModelSpec spec, const model::InteractionModel& im) {
    spec.interaction = im;
    return spec;
}

// ---- Critical-coupling curves -------------------------------------------

struct GcPoint {
    double x = 0.0;
    double gc = 0.0;
    mf::BracketStatus status = mf::BracketStatus::Ok;
};

// G_c over a parameter grid, bisected per point in parallel.
inline std::vector<GcPoint> gc_curve(const std::function<mf::MeanFieldProblem(double)>& problem_at,
                                     const std::vector<double>& xs, const ResolvedConfig& cfg,
                                     int n_atoms, int threads, RunStats& stats) {
    std::vector<GcPoint> out(xs.size());
    std::vector<mf::CriticalCouplingResult> results(xs.size());
    mf::CriticalCouplingOptions opt;
    opt.eps_sr = cfg.eps_sr();
    opt.g_tol = cfg.g_tol();
    opt.mf = cfg.meanfield_options(n_atoms);
    mf::detail::parallel_for(xs.size(), threads, [&](std::size_t i) {
        results[i] = mf::critical_coupling(problem_at(xs[i]), 0.0, cfg.g_max(), opt);
        out[i] = GcPoint{xs[i], results[i].g_c, results[i].status};
    });
    for (const auto& r : results) stats.absorb(r);
    return out;
}

// Sector pair used for the reduced two-level description at a given
// parameter point: the pair adjacent to the ground sector with the smaller
// splitting (so the near-degenerate partner is always chosen, and the pair
// switches continuously across a ground-level crossing).
inline collective::RabiParams ground_pair_params(const ops::OperatorMatrix& h_atom, int n_atoms) {
    int n_star = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> e(n_atoms + 1);
    for (int n = 0; n <= n_atoms; ++n) {
        e[n] = collective::sector_minimum(h_atom, n_atoms, n);
        if (e[n] < best) {
            best = e[n];
            n_star = n;
        }
    }
    int lo = -1;
    if (n_star == 0) lo = 0;
    else if (n_star == n_atoms) lo = n_atoms - 1;
    else lo = (std::abs(e[n_star + 1] - e[n_star]) <= std::abs(e[n_star - 1] - e[n_star]))
                  ? n_star
                  : n_star - 1;
    return collective::rabi_params_from_sectors(h_atom, n_atoms, lo);
}

// Long-format phase-diagram panels (one row per grid cell).
inline ResultTable grid_panel(const std::string& name, const std::string& x_name,
                              const mf::PhaseGrid& grid, const Eigen::MatrixXd& value,
                              const ResolvedConfig& cfg) {
    ResultTable t;
    t.name = name;
    t.columns = {x_name, "g", name, "iterations", "converged"};
    t.meta = table_meta(cfg);
    for (std::size_t ix = 0; ix < grid.xs.size(); ++ix)
        for (std::size_t ig = 0; ig < grid.gs.size(); ++ig)
            t.add_row({grid.xs[ix], grid.gs[ig], value(ix, ig), grid.iterations(ix, ig),
                       grid.converged_at(ix, ig) ? 1.0 : 0.0});
    return t;
}

inline lindblad::LiouvillianOptions sparse_liouvillian() {
    lindblad::LiouvillianOptions lopt;
    lopt.dense_max_dim = 0;  // banded generators: sparse wins at any size here
    return lopt;
}

inline lindblad::Representation representation_of(const ResolvedConfig& cfg) {
    return cfg.representation() == "symmetric" ? lindblad::Representation::SymmetricLadder
                                               : lindblad::Representation::Full;
}

// Steady photon number via the photon-cutoff convergence protocol.  Counts
// one cell; unconverged if no cutoff satisfied the tolerances.
inline double steady_photon(const model::ModelSpec& spec, const ResolvedConfig& cfg,
                            RunStats& stats, double* chosen_cutoff, bool* steady) {
    lindblad::EvolveOptions eopt;
    eopt.steady_tol = cfg.steady_tol();
    const lindblad::CutoffStudy study = lindblad::photon_cutoff_convergence(
        spec, representation_of(cfg), cfg.photon_cutoffs(), cfg.lindblad_t_final(),
        cfg.lindblad_dt(), eopt, cfg.cutoff_rel_tol(), 1e-6, sparse_liouvillian());
    ++stats.cells_total;
    if (!study.chosen) ++stats.cells_unconverged;
    const auto& entries = study.entries;
    const auto it = study.chosen
                        ? std::find_if(entries.begin(), entries.end(),
                                       [&](const lindblad::CutoffEntry& e) {
                                           return e.photon_cutoff == *study.chosen;
                                       })
                        : std::prev(entries.end());
    if (chosen_cutoff) *chosen_cutoff = study.chosen ? double(*study.chosen) : -1.0;
    if (steady) *steady = it->steady;
    return it->photon;
}

inline std::vector<double> sector_minima(const ops::OperatorMatrix& h, int n_atoms) {
    std::vector<double> e(n_atoms + 1);
    for (int n = 0; n <= n_atoms; ++n) e[n] = collective::sector_minimum(h, n_atoms, n);
    return e;
}

inline ResultTable levels_panel(const std::string& x_name, const std::vector<double>& xs,
                                const std::function<ops::OperatorMatrix(double)>& h_at,
                                int n_atoms, const ResolvedConfig& cfg) {
    ResultTable t;
    t.name = "levels";
    t.columns = {x_name};
    for (int n = 0; n <= n_atoms; ++n) t.columns.push_back("omega_" + std::to_string(n));
    t.meta = table_meta(cfg);
    for (double x : xs) {
        std::vector<double> row{x};
        const auto e = sector_minima(h_at(x), n_atoms);
        row.insert(row.end(), e.begin(), e.end());
        t.add_row(row);
    }
    return t;
}

inline json degeneracy_report(const std::string& param_name,
                              const std::vector<collective::DegeneracyEvent>& events,
                              const ResolvedConfig& cfg) {
    json out;
    out["meta"] = table_meta(cfg);
    out["parameter"] = param_name;
    out["events"] = json::array();
    for (const auto& ev : events)
        out["events"].push_back(
            {{"param", ev.param}, {"sectors", ev.sectors}, {"energy", ev.energy}});
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

// Photon number versus coupling at several exchange strengths: self-
// consistent mean field beside the dissipative quantum steady state.
inline std::vector<ResultTable> run_fig2a(const ResolvedConfig& cfg, int threads,
                                          RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const std::vector<double> vs = cfg.grid("v_dd");
    const std::vector<double> gs = cfg.grid("g");
    const bool with_quantum = cfg.lindblad_enabled();

    ResultTable t;
    t.name = "curves";
    t.columns = {"g"};
    for (std::size_t i = 1; i <= vs.size(); ++i) {
        t.columns.push_back("mf_photon_" + std::to_string(i));
        if (with_quantum) {
            t.columns.push_back("qm_photon_" + std::to_string(i));
            t.columns.push_back("qm_cutoff_" + std::to_string(i));
        }
    }
    t.meta = detail::table_meta(cfg);
    t.meta["v_dd_values"] = vs;

    const std::size_t stride = with_quantum ? 3 : 1;
    std::vector<std::vector<double>> rows(gs.size());
    for (std::size_t ig = 0; ig < gs.size(); ++ig) {
        rows[ig].assign(1 + stride * vs.size(), 0.0);
        rows[ig][0] = gs[ig];
    }
    for (std::size_t iv = 0; iv < vs.size(); ++iv) {
        model::ModelSpec spec = detail::spec_with(base, model::ConstantDipole{vs[iv]});
        mf::MeanFieldProblem p = mf::full_problem(spec);
        const mf::MeanFieldOptions opt = cfg.meanfield_options(spec.n_atoms);
        for (std::size_t ig = 0; ig < gs.size(); ++ig) {
            p.g = gs[ig];
            const mf::MeanFieldSolution s = mf::solve_meanfield(p, opt);
            ++stats.cells_total;
            if (!s.converged) ++stats.cells_unconverged;
            rows[ig][1 + stride * iv] = s.photon_number;
            if (with_quantum) {
                spec.coupling_g = gs[ig];
                double cutoff = -1.0;
                rows[ig][2 + stride * iv] =
                    detail::steady_photon(spec, cfg, stats, &cutoff, nullptr);
                rows[ig][3 + stride * iv] = cutoff;
            }
        }
    }
    (void)threads;
    for (auto& row : rows) t.add_row(std::move(row));
    return {std::move(t)};
}

// Steady-state phase diagrams over (1/v_dd, G): photon number and the
// collective correlation <S^x>.
inline std::vector<ResultTable> run_fig2bc(const ResolvedConfig& cfg, int threads,
                                           RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const auto problem_at = [&](double inv_v) {
        return mf::full_problem(
            detail::spec_with(base, model::ConstantDipole{1.0 / inv_v}));
    };
    const mf::PhaseGrid grid =
        mf::sweep_phase_diagram(problem_at, cfg.grid("inv_v"), cfg.grid("g"), cfg.eps_sr(),
                                cfg.meanfield_options(base.n_atoms), threads);
    stats.absorb(grid);
    return {detail::grid_panel("photon", "inv_v", grid, grid.photon, cfg),
            detail::grid_panel("sx", "inv_v", grid, grid.sx, cfg)};
}

// Critical coupling versus 1/v_dd for several cavity decay rates.
inline std::vector<ResultTable> run_fig2d(const ResolvedConfig& cfg, int threads,
                                          RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const std::vector<double> xs = cfg.grid("inv_v");
    const std::vector<double> kappas = cfg.grid("kappa");

    ResultTable t;
    t.name = "gc";
    t.columns = {"inv_v", "v_dd"};
    for (std::size_t i = 1; i <= kappas.size(); ++i)
        t.columns.push_back("gc_" + std::to_string(i));
    t.meta = detail::table_meta(cfg);
    t.meta["kappa_values"] = kappas;

    std::vector<std::vector<detail::GcPoint>> curves;
    for (double kappa : kappas) {
        model::ModelSpec spec = base;
        spec.kappa = kappa;
        curves.push_back(detail::gc_curve(
            [&spec](double inv_v) {
                return mf::full_problem(
                    detail::spec_with(spec, model::ConstantDipole{1.0 / inv_v}));
            },
            xs, cfg, base.n_atoms, threads, stats));
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<double> row{xs[i], 1.0 / xs[i]};
        for (const auto& curve : curves) row.push_back(curve[i].gc);
        t.add_row(row);
    }
    return {std::move(t)};
}

// Critical coupling versus 1/v_dd: full mean field beside the reduced
// two-level (sector-pair) prediction, pair chosen per region.
inline std::vector<ResultTable> run_fig3(const ResolvedConfig& cfg, int threads,
                                         RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const int n_atoms = base.n_atoms;
    const std::vector<double> xs = cfg.grid("inv_v");

    const auto curve = detail::gc_curve(
        [&](double inv_v) {
            return mf::full_problem(
                detail::spec_with(base, model::ConstantDipole{1.0 / inv_v}));
        },
        xs, cfg, n_atoms, threads, stats);

    // Regions around the vanishing-G_c points: pair n covers the
    // neighbourhood of 1/v = -(N - 2n - 1).
    std::vector<std::pair<double, int>> centers;
    for (int n = 0; n + 1 <= n_atoms; ++n)
        if (const auto vc = collective::critical_vdd(n_atoms, n, base.omega_a); vc && *vc < 0)
            centers.emplace_back(1.0 / *vc, n);

    ResultTable t;
    t.name = "gc";
    t.columns = {"inv_v", "v_dd", "gc_full", "gc_rabi", "pair_lo"};
    t.meta = detail::table_meta(cfg);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double inv_v = xs[i];
        int pair = centers.empty() ? 0 : centers[0].second;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [center, n] : centers)
            if (std::abs(inv_v - center) < best) {
                best = std::abs(inv_v - center);
                pair = n;
            }
        const auto rp = collective::rabi_params(n_atoms, pair, base.omega_a, 1.0 / inv_v);
        const double gc_rabi =
            collective::rabi_critical_g(rp, n_atoms, base.omega_c, base.kappa);
        t.add_row({inv_v, 1.0 / inv_v, curve[i].gc, gc_rabi, double(pair)});
    }
    return {std::move(t)};
}

// Chain with dipolar exchange plus state-dependent van-der-Waals shifts,
// swept over the lattice spacing: sector energies, critical coupling (full
// and reduced), and ground-level degeneracy locations.
inline std::vector<ResultTable> run_fig4(const ResolvedConfig& cfg, int threads,
                                         RunStats& stats, json* degeneracies) {
    const model::ModelSpec base = cfg.model();
    const auto* rp0 = std::get_if<model::RealisticPotential>(&base.interaction);
    if (!rp0) throw std::invalid_argument("spacing sweep requires the realistic interaction");
    const int n_atoms = base.n_atoms;
    const std::vector<double> xs = cfg.grid("r0");

    const auto spec_at = [&](double r0) {
        model::RealisticPotential rp = *rp0;
        rp.r0 = r0;
        return detail::spec_with(base, rp);
    };
    const auto h_at = [&](double r0) { return model::build_h_atom(spec_at(r0)); };

    std::vector<ResultTable> tables;
    tables.push_back(detail::levels_panel("r0", xs, h_at, n_atoms, cfg));

    const auto curve = detail::gc_curve(
        [&](double r0) { return mf::full_problem(spec_at(r0)); }, xs, cfg, n_atoms,
        threads, stats);

    ResultTable gc;
    gc.name = "gc";
    gc.columns = {"r0", "gc_full", "gc_rabi", "pair_lo", "pair_delta"};
    gc.meta = detail::table_meta(cfg);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto pr = detail::ground_pair_params(h_at(xs[i]), n_atoms);
        const double gr = collective::rabi_critical_g(pr, n_atoms, base.omega_c, base.kappa);
        gc.add_row({xs[i], curve[i].gc, gr, double(pr.n), pr.delta});
    }
    tables.push_back(std::move(gc));

    if (degeneracies) {
        const auto events =
            collective::scan_degeneracies(h_at, n_atoms, xs, cfg.scan_options());
        *degeneracies = detail::degeneracy_report("r0", events, cfg);
    }
    return tables;
}

// Mean-field photon curves from the truncated symmetric ladder at several
// truncation depths beside the untruncated (full-space) result.
inline std::vector<ResultTable> run_s1(const ResolvedConfig& cfg, int threads,
                                       RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const std::vector<double> vs = cfg.grid("v_dd");
    const std::vector<double> gs = cfg.grid("g");
    const std::vector<int> cuts = cfg.int_grid("n_cut");
    const mf::MeanFieldOptions opt = cfg.meanfield_options(base.n_atoms);

    std::vector<ResultTable> tables;
    for (std::size_t iv = 0; iv < vs.size(); ++iv) {
        const model::ModelSpec spec =
            detail::spec_with(base, model::ConstantDipole{vs[iv]});
        ResultTable t;
        t.name = "curves_" + std::to_string(iv + 1);
        t.columns = {"g", "photon_full"};
        for (int nc : cuts) t.columns.push_back("photon_nc_" + std::to_string(nc));
        t.meta = detail::table_meta(cfg);
        t.meta["v_dd"] = vs[iv];

        std::vector<mf::MeanFieldProblem> problems;
        problems.push_back(mf::full_problem(spec));
        for (int nc : cuts) problems.push_back(mf::symmetric_problem(spec, nc));
        for (double g : gs) {
            std::vector<double> row{g};
            for (auto& p : problems) {
                p.g = g;
                const mf::MeanFieldSolution s = mf::solve_meanfield(p, opt);
                ++stats.cells_total;
                if (!s.converged) ++stats.cells_unconverged;
                row.push_back(s.photon_number);
            }
            t.add_row(row);
        }
        tables.push_back(std::move(t));
    }
    (void)threads;
    return tables;
}

// Large-array phase diagrams on the symmetric ladder.
inline std::vector<ResultTable> run_s2(const ResolvedConfig& cfg, int threads,
                                       RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const auto problem_at = [&](double inv_v) {
        return mf::symmetric_problem(
            detail::spec_with(base, model::ConstantDipole{1.0 / inv_v}), base.n_atoms);
    };
    const mf::PhaseGrid grid =
        mf::sweep_phase_diagram(problem_at, cfg.grid("inv_v"), cfg.grid("g"), cfg.eps_sr(),
                                cfg.meanfield_options(base.n_atoms), threads);
    stats.absorb(grid);
    return {detail::grid_panel("photon", "inv_v", grid, grid.photon, cfg),
            detail::grid_panel("sx", "inv_v", grid, grid.sx, cfg)};
}

// Spatially decaying dipolar exchange: critical coupling (full and reduced)
// and sector energies versus the nearest-neighbour strength.
inline std::vector<ResultTable> run_s3(const ResolvedConfig& cfg, int threads,
                                       RunStats& stats, json* degeneracies) {
    const model::ModelSpec base = cfg.model();
    const int n_atoms = base.n_atoms;
    const std::vector<double> xs = cfg.grid("v_dd");
    const auto spec_at = [&](double v) {
        return detail::spec_with(base, model::SpatialDipole{v});
    };
    const auto h_at = [&](double v) { return model::build_h_atom(spec_at(v)); };

    std::vector<ResultTable> tables;
    tables.push_back(detail::levels_panel("v_dd", xs, h_at, n_atoms, cfg));

    const auto curve = detail::gc_curve(
        [&](double v) { return mf::full_problem(spec_at(v)); }, xs, cfg, n_atoms, threads,
        stats);

    ResultTable gc;
    gc.name = "gc";
    gc.columns = {"v_dd", "gc_full", "gc_rabi", "pair_lo", "pair_delta"};
    gc.meta = detail::table_meta(cfg);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto pr = detail::ground_pair_params(h_at(xs[i]), n_atoms);
        const double gr = collective::rabi_critical_g(pr, n_atoms, base.omega_c, base.kappa);
        gc.add_row({xs[i], curve[i].gc, gr, double(pr.n), pr.delta});
    }
    tables.push_back(std::move(gc));

    if (degeneracies) {
        const auto events =
            collective::scan_degeneracies(h_at, n_atoms, xs, cfg.scan_options());
        *degeneracies = detail::degeneracy_report("v_dd", events, cfg);
    }
    return tables;
}

// State-dependent (projector) shifts without exchange: ground-adjacent
// sector gaps, the critical-coupling curve, and phase diagrams.
inline std::vector<ResultTable> run_s4(const ResolvedConfig& cfg, int threads,
                                       RunStats& stats) {
    const model::ModelSpec base = cfg.model();
    const int n_atoms = base.n_atoms;
    const std::vector<double> xs = cfg.grid("v_pp");
    const auto spec_at = [&](double v) {
        return detail::spec_with(base, model::AllToAllVdw{v});
    };

    ResultTable gap;
    gap.name = "gap";
    gap.columns = {"v_pp", "ground_sector", "gap_ground_adjacent", "gap_two_lowest"};
    gap.meta = detail::table_meta(cfg);
    for (double v : xs) {
        const auto e = detail::sector_minima(model::build_h_atom(spec_at(v)), n_atoms);
        const auto ground = std::min_element(e.begin(), e.end());
        const int n_star = int(ground - e.begin());
        double adj = std::numeric_limits<double>::infinity();
        if (n_star > 0) adj = std::min(adj, e[n_star - 1] - e[n_star]);
        if (n_star < n_atoms) adj = std::min(adj, e[n_star + 1] - e[n_star]);
        std::vector<double> sorted(e);
        std::sort(sorted.begin(), sorted.end());
        gap.add_row({v, double(n_star), adj, sorted[1] - sorted[0]});
    }

    const auto curve = detail::gc_curve(
        [&](double v) { return mf::full_problem(spec_at(v)); }, xs, cfg, n_atoms, threads,
        stats);
    ResultTable gc;
    gc.name = "gc";
    gc.columns = {"v_pp", "gc_full"};
    gc.meta = detail::table_meta(cfg);
    for (const auto& pt : curve) gc.add_row({pt.x, pt.gc});

    const mf::PhaseGrid grid = mf::sweep_phase_diagram(
        [&](double v) { return mf::full_problem(spec_at(v)); }, xs, cfg.grid("g"),
        cfg.eps_sr(), cfg.meanfield_options(n_atoms), threads);
    stats.absorb(grid);

    std::vector<ResultTable> tables;
    tables.push_back(std::move(gap));
    tables.push_back(std::move(gc));
    tables.push_back(detail::grid_panel("photon", "v_pp", grid, grid.photon, cfg));
    tables.push_back(detail::grid_panel("sx", "v_pp", grid, grid.sx, cfg));
    return tables;
}

// Fine spacing scan around a multi-sector ground degeneracy: sector
// energies, the full critical coupling, and the two sector-pair reductions
// meeting at the crossing.
inline std::vector<ResultTable> run_s5(const ResolvedConfig& cfg, int threads,
                                       RunStats& stats, json* degeneracies) {
    const model::ModelSpec base = cfg.model();
    const auto* rp0 = std::get_if<model::RealisticPotential>(&base.interaction);
    if (!rp0) throw std::invalid_argument("spacing sweep requires the realistic interaction");
    const int n_atoms = base.n_atoms;
    if (n_atoms < 2) throw std::invalid_argument("spacing sweep needs at least two atoms");
    const std::vector<double> xs = cfg.grid("r0");

    const auto spec_at = [&](double r0) {
        model::RealisticPotential rp = *rp0;
        rp.r0 = r0;
        return detail::spec_with(base, rp);
    };
    const auto h_at = [&](double r0) { return model::build_h_atom(spec_at(r0)); };

    std::vector<ResultTable> tables;
    tables.push_back(detail::levels_panel("r0", xs, h_at, n_atoms, cfg));

    const auto curve = detail::gc_curve(
        [&](double r0) { return mf::full_problem(spec_at(r0)); }, xs, cfg, n_atoms,
        threads, stats);

    // The two top adjacent pairs, which meet at the fully inverted end of
    // the ladder where the crossing cluster lives.
    const int pair_a = n_atoms - 2, pair_b = n_atoms - 1;
    ResultTable gc;
    gc.name = "gc";
    gc.columns = {"r0", "gc_full", "gc_rabi_a", "gc_rabi_b"};
    gc.meta = detail::table_meta(cfg);
    gc.meta["pair_a"] = json::array({pair_a, pair_a + 1});
    gc.meta["pair_b"] = json::array({pair_b, pair_b + 1});
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const ops::OperatorMatrix h = h_at(xs[i]);
        const auto pa = collective::rabi_params_from_sectors(h, n_atoms, pair_a);
        const auto pb = collective::rabi_params_from_sectors(h, n_atoms, pair_b);
        gc.add_row({xs[i], curve[i].gc,
                    collective::rabi_critical_g(pa, n_atoms, base.omega_c, base.kappa),
                    collective::rabi_critical_g(pb, n_atoms, base.omega_c, base.kappa)});
    }
    tables.push_back(std::move(gc));

    if (degeneracies) {
        const auto events =
            collective::scan_degeneracies(h_at, n_atoms, xs, cfg.scan_options());
        *degeneracies = detail::degeneracy_report("r0", events, cfg);
    }
    return tables;
}

// Direct access: mean-field curve (and optionally the dissipative steady
// state) over the coupling grid for whatever model the config describes.
inline std::vector<ResultTable> run_custom(const ResolvedConfig& cfg, int threads,
                                           RunStats& stats) {
    model::ModelSpec spec = cfg.model();
    const std::vector<double> gs = cfg.grid("g");
    const mf::MeanFieldOptions opt = cfg.meanfield_options(spec.n_atoms);

    ResultTable t;
    t.name = "meanfield";
    t.columns = {"g", "photon", "sx", "iterations", "converged"};
    t.meta = detail::table_meta(cfg);
    mf::MeanFieldProblem p = mf::full_problem(spec);
    for (double g : gs) {
        p.g = g;
        const mf::MeanFieldSolution s = mf::solve_meanfield(p, opt);
        ++stats.cells_total;
        if (!s.converged) ++stats.cells_unconverged;
        t.add_row({g, s.photon_number, s.sx, double(s.iterations), s.converged ? 1.0 : 0.0});
    }
    std::vector<ResultTable> tables;
    tables.push_back(std::move(t));

    if (cfg.lindblad_enabled()) {
        ResultTable q;
        q.name = "lindblad";
        q.columns = {"g", "photon", "cutoff", "steady"};
        q.meta = detail::table_meta(cfg);
        for (double g : gs) {
            spec.coupling_g = g;
            double cutoff = -1.0;
            bool steady = false;
            const double photon = detail::steady_photon(spec, cfg, stats, &cutoff, &steady);
            q.add_row({g, photon, cutoff, steady ? 1.0 : 0.0});
        }
        tables.push_back(std::move(q));
    }
    (void)threads;
    return tables;
}

// ---------------------------------------------------------------------------
// Dispatch, output, failure policy
// ---------------------------------------------------------------------------

namespace detail {

inline void ensure_writable_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw cfg::ConfigError("cannot create output directory " + dir + ": " + ec.message());
    const fs::path probe = fs::path(dir) / ".dicke_write_probe";
    {
        std::ofstream os(probe);
        if (!os) throw cfg::ConfigError("output directory is not writable: " + dir);
    }
    fs::remove(probe, ec);
}

inline std::string save_json_report(const std::string& dir, const std::string& prefix,
                                    const std::string& name, const json& j) {
    const std::string path = dir + "/" + prefix + "_" + name + ".json";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("failed writing output file: " + path);
    return path;
}

}  // namespace detail

// Runs the configured experiment and writes its tables into `out_dir`
// (empty = take it from the config; likewise `format`).  Throws ConfigError
// for unusable output locations and SolverFailure when more than the
// configured fraction of solver calls failed to converge — output files are
// written first either way, so partial results survive a failed run.
inline RunReport run_experiment(const ResolvedConfig& cfg, std::string out_dir = "",
                                std::string format = "", int threads = 1) {
    if (out_dir.empty()) out_dir = cfg.output_directory();
    if (format.empty()) format = cfg.output_format();
    if (threads < 1) throw cfg::ConfigError("thread count must be >= 1");
    detail::ensure_writable_directory(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    std::vector<ResultTable> tables;
    json degeneracies;
    bool have_degeneracies = false;
    const std::string name = cfg.experiment();

    try {
        if (name == "fig2a") {
            tables = run_fig2a(cfg, threads, report.stats);
        } else if (name == "fig2bc") {
            tables = run_fig2bc(cfg, threads, report.stats);
        } else if (name == "fig2d") {
            tables = run_fig2d(cfg, threads, report.stats);
        } else if (name == "fig3") {
            tables = run_fig3(cfg, threads, report.stats);
        } else if (name == "fig4") {
            tables = run_fig4(cfg, threads, report.stats, &degeneracies);
            have_degeneracies = true;
        } else if (name == "s1") {
            tables = run_s1(cfg, threads, report.stats);
        } else if (name == "s2") {
            tables = run_s2(cfg, threads, report.stats);
        } else if (name == "s3") {
            tables = run_s3(cfg, threads, report.stats, &degeneracies);
            have_degeneracies = true;
        } else if (name == "s4") {
            tables = run_s4(cfg, threads, report.stats);
        } else if (name == "s5") {
            tables = run_s5(cfg, threads, report.stats, &degeneracies);
            have_degeneracies = true;
        } else if (name == "custom") {
            tables = run_custom(cfg, threads, report.stats);
        } else {
            throw cfg::ConfigError("unknown experiment \"" + name + "\"");
        }
    } catch (const SolverFailure&) {
        throw;
    } catch (const cfg::ConfigError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw SolverFailure(std::string("solver failure in experiment ") + name + ": " +
                            e.what());
    }

    for (const auto& t : tables) report.files.push_back(t.save(out_dir, name, format));
    if (have_degeneracies)
        report.files.push_back(
            detail::save_json_report(out_dir, name, "degeneracies", degeneracies));

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double frac = report.stats.unconverged_fraction();
    if (frac > cfg.max_unconverged_fraction()) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "solver failure: %.1f%% of %zu solver calls did not converge "
                      "(limit %.1f%%); outputs were still written",
                      100.0 * frac, report.stats.cells_total,
                      100.0 * cfg.max_unconverged_fraction());
        throw SolverFailure(buf);
    }
    return report;
}

}  // namespace dicke::exp
