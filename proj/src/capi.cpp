#include "paracalc/paracalc.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dyadic.hpp"
#include "errors.hpp"
#include "green.hpp"
#include "grid.hpp"
#include "paraproduct.hpp"
#include "parametrix.hpp"
#include "regcalc.hpp"

using namespace paracalc;

struct pc_grid {
    TorusGrid grid;
};
struct pc_partition {
    DyadicPartition partition;
};
struct pc_gridfn {
    GridFunction fn;
};
struct pc_domainfn {
    DomainFunction fn;
};
struct pc_paralin {
    Paralinearization lin;
};
struct pc_problem {
    ProblemInstance instance;
    pc_domainfn f_handle;
    pc_domainfn reference_handle;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
pc_status guarded(Fn&& fn) {
    try {
        fn();
        return PC_OK;
    } catch (const GridMismatchError& e) {
        set_error(e.what());
        return PC_ERR_GRID_MISMATCH;
    } catch (const IndexRangeError& e) {
        set_error(e.what());
        return PC_ERR_INDEX_RANGE;
    } catch (const EstimationError& e) {
        set_error(e.what());
        return PC_ERR_ESTIMATION;
    } catch (const PreconditionError& e) {
        set_error(e.what());
        return PC_ERR_INVALID_ARGUMENT;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return PC_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return PC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PC_ERR_INTERNAL;
    }
}

pc_status require(bool ok, const char* message) {
    if (ok) return PC_OK;
    set_error(message);
    return PC_ERR_INVALID_ARGUMENT;
}

pc_status copy_out(const std::vector<double>& src, double* out, size_t cap) {
    if (!out) {
        set_error("output buffer is null");
        return PC_ERR_INVALID_ARGUMENT;
    }
    if (cap < src.size()) {
        set_error("output buffer too small: need " + std::to_string(src.size()));
        return PC_ERR_BUFFER_TOO_SMALL;
    }
    std::memcpy(out, src.data(), src.size() * sizeof(double));
    return PC_OK;
}

} // namespace

extern "C" {

const char* pc_last_error(void) { return g_last_error.c_str(); }

const char* pc_version(void) { return "1.0.0"; }

/* ------------------------------------------------------------------ */

pc_status pc_grid_create(int level, pc_grid** out) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    return guarded([&] { *out = new pc_grid{TorusGrid(level)}; });
}

void pc_grid_destroy(pc_grid* grid) { delete grid; }

int pc_grid_level(const pc_grid* grid) { return grid ? grid->grid.level() : 0; }

size_t pc_grid_size(const pc_grid* grid) { return grid ? grid->grid.size() : 0; }

size_t pc_grid_domain_size(const pc_grid* grid) {
    return grid ? grid->grid.domain_size() : 0;
}

pc_status pc_partition_create(const pc_grid* grid, double transition,
                              pc_partition** out) {
    if (auto rc = require(grid && out, "grid/out is null")) return rc;
    return guarded([&] {
        *out = new pc_partition{DyadicPartition(grid->grid, BlockProfile{transition})};
    });
}

void pc_partition_destroy(pc_partition* partition) { delete partition; }

int pc_partition_top_block(const pc_partition* partition) {
    return partition ? partition->partition.top_block() : -1;
}

/* ------------------------------------------------------------------ */

pc_status pc_gridfn_create(const pc_grid* grid, const double* values, size_t len,
                           pc_gridfn** out) {
    if (auto rc = require(grid && values && out, "grid/values/out is null")) return rc;
    return guarded([&] {
        *out = new pc_gridfn{
            GridFunction(grid->grid, std::vector<double>(values, values + len))};
    });
}

void pc_gridfn_destroy(pc_gridfn* fn) { delete fn; }

size_t pc_gridfn_size(const pc_gridfn* fn) { return fn ? fn->fn.values().size() : 0; }

pc_status pc_gridfn_values(const pc_gridfn* fn, double* out, size_t cap) {
    if (auto rc = require(fn != nullptr, "function handle is null")) return rc;
    return copy_out(fn->fn.values(), out, cap);
}

pc_status pc_gridfn_sup_norm(const pc_gridfn* fn, double* out) {
    if (auto rc = require(fn && out, "function/out is null")) return rc;
    *out = fn->fn.sup_norm();
    return PC_OK;
}

pc_status pc_gridfn_derivative(const pc_gridfn* fn, pc_gridfn** out) {
    if (auto rc = require(fn && out, "function/out is null")) return rc;
    return guarded([&] { *out = new pc_gridfn{fn->fn.derivative()}; });
}

pc_status pc_gridfn_multiply(const pc_gridfn* a, const pc_gridfn* b, pc_gridfn** out) {
    if (auto rc = require(a && b && out, "operand/out is null")) return rc;
    return guarded([&] { *out = new pc_gridfn{a->fn * b->fn}; });
}

pc_status pc_synthesize_rough(const pc_grid* grid, double sigma, uint64_t seed,
                              pc_gridfn** out) {
    if (auto rc = require(grid && out, "grid/out is null")) return rc;
    return guarded([&] { *out = new pc_gridfn{synthesize_rough(sigma, seed, grid->grid)}; });
}

pc_status pc_apply_block(const pc_partition* partition, int block, const pc_gridfn* fn,
                         pc_gridfn** out) {
    if (auto rc = require(partition && fn && out, "partition/function/out is null"))
        return rc;
    return guarded(
        [&] { *out = new pc_gridfn{partition->partition.apply_block(block, fn->fn)}; });
}

pc_status pc_low_pass(const pc_partition* partition, int block, const pc_gridfn* fn,
                      pc_gridfn** out) {
    if (auto rc = require(partition && fn && out, "partition/function/out is null"))
        return rc;
    return guarded(
        [&] { *out = new pc_gridfn{partition->partition.low_pass(block, fn->fn)}; });
}

pc_status pc_block_norms(const pc_partition* partition, const pc_gridfn* fn, double p,
                         double* out, size_t cap, size_t* out_len) {
    if (auto rc = require(partition && fn && out_len, "partition/function/out is null"))
        return rc;
    BlockNormProfile profile;
    if (auto rc = guarded([&] { profile = block_norms(partition->partition, fn->fn, p); }))
        return rc;
    if (auto rc = copy_out(profile.norms, out, cap)) return rc;
    *out_len = profile.norms.size();
    return PC_OK;
}

pc_status pc_estimate_smoothness(const double* norms, size_t len, double* out) {
    if (auto rc = require(norms && out, "norms/out is null")) return rc;
    return guarded([&] {
        BlockNormProfile profile;
        profile.norms.assign(norms, norms + len);
        *out = estimate_smoothness(profile);
    });
}

pc_status pc_sobolev_norm(const pc_gridfn* fn, double s, double p, double* out) {
    if (auto rc = require(fn && out, "function/out is null")) return rc;
    return guarded([&] { *out = sobolev_norm(fn->fn, s, p); });
}

/* ------------------------------------------------------------------ */

pc_status pc_domainfn_create(const pc_grid* grid, const double* values, size_t len,
                             pc_domainfn** out) {
    if (auto rc = require(grid && values && out, "grid/values/out is null")) return rc;
    return guarded([&] {
        *out = new pc_domainfn{
            DomainFunction(grid->grid, std::vector<double>(values, values + len))};
    });
}

void pc_domainfn_destroy(pc_domainfn* fn) { delete fn; }

size_t pc_domainfn_size(const pc_domainfn* fn) { return fn ? fn->fn.size() : 0; }

pc_status pc_domainfn_values(const pc_domainfn* fn, double* out, size_t cap) {
    if (auto rc = require(fn != nullptr, "function handle is null")) return rc;
    return copy_out(fn->fn.values(), out, cap);
}

pc_status pc_domainfn_sup_norm(const pc_domainfn* fn, double* out) {
    if (auto rc = require(fn && out, "function/out is null")) return rc;
    *out = fn->fn.sup_norm();
    return PC_OK;
}

pc_status pc_domainfn_axpy(double alpha, const pc_domainfn* x, const pc_domainfn* y,
                           pc_domainfn** out) {
    if (auto rc = require(x && y && out, "operand/out is null")) return rc;
    return guarded([&] { *out = new pc_domainfn{alpha * x->fn + y->fn}; });
}

pc_status pc_trace(const pc_domainfn* u, double* phi0, double* phi1) {
    if (auto rc = require(u && phi0 && phi1, "argument is null")) return rc;
    const BoundaryData b = trace(u->fn);
    *phi0 = b.phi0;
    *phi1 = b.phi1;
    return PC_OK;
}

pc_status pc_extend(const pc_domainfn* u, int order, pc_gridfn** out) {
    if (auto rc = require(u && out, "function/out is null")) return rc;
    return guarded([&] { *out = new pc_gridfn{extend(u->fn, order)}; });
}

pc_status pc_restrict(const pc_gridfn* fn, pc_domainfn** out) {
    if (auto rc = require(fn && out, "function/out is null")) return rc;
    return guarded([&] { *out = new pc_domainfn{restrict_to_domain(fn->fn)}; });
}

/* ------------------------------------------------------------------ */

pc_status pc_paraproduct(const pc_partition* partition, int kind, const pc_gridfn* g,
                         const pc_gridfn* h, pc_gridfn** out) {
    if (auto rc = require(partition && g && h && out, "argument is null")) return rc;
    return guarded(
        [&] { *out = new pc_gridfn{paraproduct(kind, g->fn, h->fn, partition->partition)}; });
}

pc_status pc_paralin_create(const pc_domainfn* base, const pc_partition* partition,
                            int order, pc_paralin** out) {
    if (auto rc = require(base && partition && out, "argument is null")) return rc;
    return guarded([&] {
        *out = new pc_paralin{Paralinearization(base->fn, partition->partition, order)};
    });
}

void pc_paralin_destroy(pc_paralin* lin) { delete lin; }

pc_status pc_paralin_apply(const pc_paralin* lin, const pc_domainfn* v,
                           pc_domainfn** out) {
    if (auto rc = require(lin && v && out, "argument is null")) return rc;
    return guarded([&] { *out = new pc_domainfn{lin->lin.apply(v->fn)}; });
}

/* ------------------------------------------------------------------ */

pc_status pc_solve_dirichlet(const pc_domainfn* f, pc_domainfn** out) {
    if (auto rc = require(f && out, "argument is null")) return rc;
    return guarded([&] { *out = new pc_domainfn{solve_dirichlet(f->fn)}; });
}

pc_status pc_poisson_part(const pc_grid* grid, double phi0, double phi1,
                          pc_domainfn** out) {
    if (auto rc = require(grid && out, "argument is null")) return rc;
    return guarded(
        [&] { *out = new pc_domainfn{poisson_part(grid->grid, {phi0, phi1})}; });
}

pc_status pc_apply_a(const pc_domainfn* u, int order, pc_domainfn** out) {
    if (auto rc = require(u && out, "argument is null")) return rc;
    return guarded([&] { *out = new pc_domainfn{apply_a(u->fn, order)}; });
}

pc_status pc_manufacture(const pc_grid* grid, const int* wavenumbers,
                         const double* amplitudes, size_t nmodes, double phi0,
                         double phi1, pc_problem** out) {
    if (auto rc = require(grid && out, "argument is null")) return rc;
    if (auto rc = require(nmodes == 0 || (wavenumbers && amplitudes),
                          "mode arrays are null"))
        return rc;
    return guarded([&] {
        std::vector<SineMode> modes(nmodes);
        for (size_t i = 0; i < nmodes; ++i) modes[i] = {wavenumbers[i], amplitudes[i]};
        ProblemInstance instance = manufacture(modes, {phi0, phi1}, grid->grid);
        auto problem = std::make_unique<pc_problem>(
            pc_problem{instance, pc_domainfn{instance.f},
                       pc_domainfn{*instance.reference}});
        *out = problem.release();
    });
}

void pc_problem_destroy(pc_problem* problem) { delete problem; }

const pc_domainfn* pc_problem_f(const pc_problem* problem) {
    return problem ? &problem->f_handle : nullptr;
}

const pc_domainfn* pc_problem_reference(const pc_problem* problem) {
    return problem ? &problem->reference_handle : nullptr;
}

pc_status pc_problem_boundary(const pc_problem* problem, double* phi0, double* phi1) {
    if (auto rc = require(problem && phi0 && phi1, "argument is null")) return rc;
    *phi0 = problem->instance.boundary.phi0;
    *phi1 = problem->instance.boundary.phi1;
    return PC_OK;
}

/* ------------------------------------------------------------------ */

pc_status pc_apply_rl(const pc_paralin* lin, const pc_domainfn* v, pc_domainfn** out) {
    if (auto rc = require(lin && v && out, "argument is null")) return rc;
    return guarded([&] { *out = new pc_domainfn{apply_rl(lin->lin, v->fn)}; });
}

pc_status pc_apply_parametrix(const pc_paralin* lin, int series_len,
                              const pc_domainfn* w, pc_domainfn** out) {
    if (auto rc = require(lin && w && out, "argument is null")) return rc;
    return guarded(
        [&] { *out = new pc_domainfn{apply_parametrix(lin->lin, series_len, w->fn)}; });
}

pc_status pc_parametrix_residual(const pc_problem* problem, const pc_domainfn* u,
                                 const pc_partition* partition, int series_len,
                                 int order, pc_domainfn** out_residual,
                                 double* out_sup) {
    if (auto rc = require(problem && u && partition && out_sup, "argument is null"))
        return rc;
    return guarded([&] {
        ParametrixConfig config{series_len, order};
        ResidualResult result =
            parametrix_residual(problem->instance, u->fn, partition->partition, config);
        *out_sup = result.sup;
        if (out_residual) *out_residual = new pc_domainfn{std::move(result.residual)};
    });
}

pc_status pc_smoothing_profile(const pc_domainfn* u, const pc_partition* partition,
                               int series_len, int order, double p, double* out_sigma,
                               uint8_t* out_defined, size_t cap, size_t* out_len) {
    if (auto rc = require(u && partition && out_sigma && out_defined && out_len,
                          "argument is null"))
        return rc;
    SmoothingReport report;
    if (auto rc = guarded([&] {
            ParametrixConfig config{series_len, order};
            report = smoothing_profile(u->fn, partition->partition, config, p);
        }))
        return rc;
    if (cap < report.sigma.size()) {
        set_error("output buffer too small: need " + std::to_string(report.sigma.size()));
        return PC_ERR_BUFFER_TOO_SMALL;
    }
    for (size_t k = 0; k < report.sigma.size(); ++k) {
        out_defined[k] = report.sigma[k].has_value() ? 1 : 0;
        out_sigma[k] = report.sigma[k].value_or(0.0);
    }
    *out_len = report.sigma.size();
    return PC_OK;
}

/* ------------------------------------------------------------------ */

pc_status pc_in_domain_a(double s, double p, int n, int* out) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    return guarded([&] { *out = in_domain_a({s, p, n}) ? 1 : 0; });
}

pc_status pc_in_domain_n(double s, double p, int n, int* out) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    return guarded([&] { *out = in_domain_n({s, p, n}) ? 1 : 0; });
}

pc_status pc_in_domain_lu(double s, double p, double s0, double p0, int n, int* out) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    return guarded([&] { *out = in_domain_lu({s, p, n}, {s0, p0, n}) ? 1 : 0; });
}

pc_status pc_order_omega(double s0, double p0, int n, double epsilon, double* out) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    return guarded([&] { *out = order_omega({s0, p0, n}, epsilon).omega; });
}

pc_status pc_embeds(double s_src, double p_src, double s_dst, double p_dst, int n,
                    int* out) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    return guarded([&] { *out = embeds({s_src, p_src, n}, {s_dst, p_dst, n}) ? 1 : 0; });
}

pc_status pc_minimal_n(double s0, double p0, double t, double r, int n, double epsilon,
                       int max_n, int* out_n, pc_path_step* path, size_t cap,
                       size_t* out_path_len, int* out_bootstrap_n) {
    if (auto rc = require(out_n && out_path_len && out_bootstrap_n, "out is null"))
        return rc;
    MinimalNResult result;
    if (auto rc = guarded(
            [&] { result = minimal_n({s0, p0, n}, {t, r, n}, epsilon, max_n); }))
        return rc;
    if (path && cap < result.path.size()) {
        set_error("path buffer too small: need " + std::to_string(result.path.size()));
        return PC_ERR_BUFFER_TOO_SMALL;
    }
    *out_n = result.n.value_or(-1);
    *out_bootstrap_n = result.bootstrap_n.value_or(-1);
    *out_path_len = result.path.size();
    if (path)
        for (size_t i = 0; i < result.path.size(); ++i)
            path[i] = {result.path[i].s, result.path[i].p,
                       static_cast<int>(result.path[i].move)};
    return PC_OK;
}

pc_status pc_rasterize_domains(double s0, double p0, int n, double s_min, double s_max,
                               double invp_min, double invp_max, int resolution,
                               uint8_t* out, size_t cap) {
    if (auto rc = require(out != nullptr, "out is null")) return rc;
    RegionGrid grid;
    if (auto rc = guarded([&] {
            grid = rasterize_domains({s0, p0, n}, s_min, s_max, invp_min, invp_max,
                                     resolution);
        }))
        return rc;
    if (cap < grid.flags.size()) {
        set_error("flag buffer too small: need " + std::to_string(grid.flags.size()));
        return PC_ERR_BUFFER_TOO_SMALL;
    }
    std::memcpy(out, grid.flags.data(), grid.flags.size());
    return PC_OK;
}

} /* extern "C" */
