#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "paracalc/paracalc.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Grid {
    pc_grid* h = nullptr;
    explicit Grid(int level) { REQUIRE(pc_grid_create(level, &h) == PC_OK); }
    ~Grid() { pc_grid_destroy(h); }
};

struct Partition {
    pc_partition* h = nullptr;
    explicit Partition(const Grid& g, double transition = 1.0) {
        REQUIRE(pc_partition_create(g.h, transition, &h) == PC_OK);
    }
    ~Partition() { pc_partition_destroy(h); }
};

std::vector<double> domain_values(const pc_domainfn* f) {
    std::vector<double> out(pc_domainfn_size(f));
    REQUIRE(pc_domainfn_values(f, out.data(), out.size()) == PC_OK);
    return out;
}

} // namespace

TEST_CASE("error reporting and handle validation") {
    pc_grid* grid = nullptr;
    CHECK(pc_grid_create(3, &grid) == PC_ERR_INVALID_ARGUMENT);
    CHECK(std::string(pc_last_error()).find("4 <= J <= 16") != std::string::npos);
    CHECK(pc_grid_create(10, nullptr) == PC_ERR_INVALID_ARGUMENT);
    CHECK(std::string(pc_version()).find('.') != std::string::npos);
}

TEST_CASE("grid and partition shape") {
    Grid grid(10);
    CHECK(pc_grid_level(grid.h) == 10);
    CHECK(pc_grid_size(grid.h) == 1024);
    CHECK(pc_grid_domain_size(grid.h) == 513);

    Partition part(grid);
    CHECK(pc_partition_top_block(part.h) == 11);

    pc_partition* bad = nullptr;
    CHECK(pc_partition_create(grid.h, 0.0, &bad) == PC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("torus pipeline: synthesis, blocks, norms, smoothness") {
    Grid grid(12);
    Partition part(grid);

    pc_gridfn* rough = nullptr;
    REQUIRE(pc_synthesize_rough(grid.h, 1.5, 9, &rough) == PC_OK);

    SUBCASE("block norms and smoothness estimate") {
        double norms[32];
        size_t len = 0;
        REQUIRE(pc_block_norms(part.h, rough, 2.0, norms, 32, &len) == PC_OK);
        CHECK(len == 14);
        double sigma = 0.0;
        REQUIRE(pc_estimate_smoothness(norms, len, &sigma) == PC_OK);
        CHECK(std::abs(sigma - 1.5) <= 0.15);

        double tiny[4] = {0, 0, 0, 0};
        CHECK(pc_estimate_smoothness(tiny, 4, &sigma) == PC_ERR_ESTIMATION);
    }

    SUBCASE("buffer too small") {
        double norms[4];
        size_t len = 0;
        CHECK(pc_block_norms(part.h, rough, 2.0, norms, 4, &len) ==
              PC_ERR_BUFFER_TOO_SMALL);
    }

    SUBCASE("block application and index range") {
        pc_gridfn* piece = nullptr;
        REQUIRE(pc_apply_block(part.h, 3, rough, &piece) == PC_OK);
        CHECK(pc_gridfn_size(piece) == 4096);
        pc_gridfn_destroy(piece);
        CHECK(pc_apply_block(part.h, 99, rough, &piece) == PC_ERR_INDEX_RANGE);
        CHECK(pc_low_pass(part.h, 1, rough, &piece) == PC_ERR_INDEX_RANGE);
    }

    SUBCASE("sobolev norm surrogate") {
        double value = 0.0;
        REQUIRE(pc_sobolev_norm(rough, 1.0, 2.0, &value) == PC_OK);
        CHECK(value > 0.0);
        CHECK(pc_sobolev_norm(rough, 1.0, 1.0, &value) == PC_ERR_INVALID_ARGUMENT);
    }

    pc_gridfn_destroy(rough);
}

TEST_CASE("domain functions, extension, trace") {
    Grid grid(10);
    const size_t count = pc_grid_domain_size(grid.h);
    std::vector<double> values(count);
    for (size_t i = 0; i < count; ++i) {
        const double x = double(i) / double(count - 1);
        values[i] = std::sin(kPi * x);
    }
    pc_domainfn* u = nullptr;
    REQUIRE(pc_domainfn_create(grid.h, values.data(), values.size(), &u) == PC_OK);

    double phi0 = -1, phi1 = -1;
    REQUIRE(pc_trace(u, &phi0, &phi1) == PC_OK);
    CHECK(phi0 == 0.0);
    CHECK(std::abs(phi1) < 1e-12);

    pc_gridfn* ext = nullptr;
    REQUIRE(pc_extend(u, 4, &ext) == PC_OK);
    pc_domainfn* back = nullptr;
    REQUIRE(pc_restrict(ext, &back) == PC_OK);
    CHECK(domain_values(back) == values);

    CHECK(pc_extend(u, 7, &ext) == PC_ERR_INVALID_ARGUMENT);

    pc_domainfn_destroy(back);
    pc_gridfn_destroy(ext);
    pc_domainfn_destroy(u);
}

TEST_CASE("paraproducts and paralinearization through the C surface") {
    Grid grid(10);
    Partition part(grid);
    pc_gridfn* g = nullptr;
    pc_gridfn* h = nullptr;
    REQUIRE(pc_synthesize_rough(grid.h, 0.8, 21, &g) == PC_OK);
    REQUIRE(pc_synthesize_rough(grid.h, 1.1, 22, &h) == PC_OK);

    SUBCASE("decomposition identity") {
        pc_gridfn* parts[3] = {nullptr, nullptr, nullptr};
        for (int kind = 1; kind <= 3; ++kind)
            REQUIRE(pc_paraproduct(part.h, kind, g, h, &parts[kind - 1]) == PC_OK);
        pc_gridfn* product = nullptr;
        REQUIRE(pc_gridfn_multiply(g, h, &product) == PC_OK);

        std::vector<double> sum(pc_gridfn_size(product), 0.0);
        std::vector<double> tmp(sum.size());
        for (auto* piece : parts) {
            REQUIRE(pc_gridfn_values(piece, tmp.data(), tmp.size()) == PC_OK);
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += tmp[i];
        }
        REQUIRE(pc_gridfn_values(product, tmp.data(), tmp.size()) == PC_OK);
        double gs = 0, hs = 0, diff = 0;
        REQUIRE(pc_gridfn_sup_norm(g, &gs) == PC_OK);
        REQUIRE(pc_gridfn_sup_norm(h, &hs) == PC_OK);
        for (size_t i = 0; i < sum.size(); ++i)
            diff = std::max(diff, std::abs(sum[i] - tmp[i]));
        CHECK(diff <= 1e-10 * gs * hs);

        for (auto* piece : parts) pc_gridfn_destroy(piece);
        pc_gridfn_destroy(product);
        pc_gridfn* bad = nullptr;
        CHECK(pc_paraproduct(part.h, 0, g, h, &bad) == PC_ERR_INVALID_ARGUMENT);
    }

    SUBCASE("grid mismatch is reported") {
        Grid other(9);
        pc_gridfn* small = nullptr;
        REQUIRE(pc_synthesize_rough(other.h, 1.0, 5, &small) == PC_OK);
        pc_gridfn* bad = nullptr;
        CHECK(pc_paraproduct(part.h, 1, g, small, &bad) == PC_ERR_GRID_MISMATCH);
        pc_gridfn_destroy(small);
    }

    pc_gridfn_destroy(g);
    pc_gridfn_destroy(h);
}

TEST_CASE("green operator and parametrix through the C surface") {
    Grid grid(11);
    Partition part(grid);

    int wavenumbers[2] = {1, 2};
    double amplitudes[2] = {0.3, 0.1};
    pc_problem* problem = nullptr;
    REQUIRE(pc_manufacture(grid.h, wavenumbers, amplitudes, 2, 0.2, -0.1, &problem) ==
            PC_OK);

    double phi0 = 0, phi1 = 0;
    REQUIRE(pc_problem_boundary(problem, &phi0, &phi1) == PC_OK);
    CHECK(phi0 == 0.2);
    CHECK(std::abs(phi1 + 0.1) < 1e-12);

    const pc_domainfn* reference = pc_problem_reference(problem);
    REQUIRE(reference != nullptr);

    SUBCASE("solve, harmonic part, forward operator") {
        pc_domainfn* solved = nullptr;
        REQUIRE(pc_solve_dirichlet(pc_problem_f(problem), &solved) == PC_OK);
        const auto values = domain_values(solved);
        CHECK(values.front() == 0.0);
        CHECK(values.back() == 0.0);
        pc_domainfn_destroy(solved);

        pc_domainfn* harmonic = nullptr;
        REQUIRE(pc_poisson_part(grid.h, 1.0, 0.0, &harmonic) == PC_OK);
        CHECK(domain_values(harmonic).front() == 1.0);
        pc_domainfn_destroy(harmonic);

        pc_domainfn* curved = nullptr;
        REQUIRE(pc_apply_a(reference, 4, &curved) == PC_OK);
        pc_domainfn_destroy(curved);
    }

    SUBCASE("residual of the inversion formula") {
        double sup = -1.0;
        REQUIRE(pc_parametrix_residual(problem, reference, part.h, 3, 4, nullptr,
                                       &sup) == PC_OK);
        CHECK(sup >= 0.0);
        CHECK(sup <= 1e-10);
        CHECK(pc_parametrix_residual(problem, reference, part.h, 99, 4, nullptr,
                                     &sup) == PC_ERR_INVALID_ARGUMENT);
    }

    SUBCASE("series and smoothing profile") {
        pc_paralin* lin = nullptr;
        REQUIRE(pc_paralin_create(reference, part.h, 4, &lin) == PC_OK);
        pc_domainfn* image = nullptr;
        REQUIRE(pc_apply_rl(lin, reference, &image) == PC_OK);
        pc_domainfn* series = nullptr;
        REQUIRE(pc_apply_parametrix(lin, 1, reference, &series) == PC_OK);
        CHECK(domain_values(series) == domain_values(reference));
        pc_domainfn_destroy(series);
        pc_domainfn_destroy(image);
        pc_paralin_destroy(lin);

        double sigma[8];
        uint8_t defined[8];
        size_t len = 0;
        REQUIRE(pc_smoothing_profile(reference, part.h, 2, 4, 2.0, sigma, defined, 8,
                                     &len) == PC_OK);
        CHECK(len == 3);
    }

    pc_problem_destroy(problem);
}

TEST_CASE("regularity calculus through the C surface") {
    int flag = -1;
    REQUIRE(pc_in_domain_a(1.0, 2.0, 1, &flag) == PC_OK);
    CHECK(flag == 1);
    REQUIRE(pc_in_domain_n(0.5, 2.0, 1, &flag) == PC_OK);
    CHECK(flag == 0);
    REQUIRE(pc_in_domain_lu(0.3, 2.0, 0.75, 2.0, 1, &flag) == PC_OK);
    CHECK(flag == 1);
    CHECK(pc_in_domain_a(1.0, 0.5, 1, &flag) == PC_ERR_INVALID_ARGUMENT);

    double omega = 0.0;
    REQUIRE(pc_order_omega(0.25, 2.0, 1, 0.0, &omega) == PC_OK);
    CHECK(std::abs(omega - 1.25) < 1e-14);

    REQUIRE(pc_embeds(2.0, 2.0, 1.2, 3.0, 1, &flag) == PC_OK);
    CHECK(flag == 1);

    SUBCASE("minimal-n with witness path") {
        int n = -2, bootstrap = -2;
        pc_path_step path[70];
        size_t path_len = 0;
        REQUIRE(pc_minimal_n(0.75, 2.0, 2.5, 2.0, 1, 0.01, 64, &n, path, 70, &path_len,
                             &bootstrap) == PC_OK);
        CHECK(n == 2);
        CHECK(bootstrap == 2);
        REQUIRE(path_len == 4);
        CHECK(path[0].move == 0);
        CHECK(path[3].move == 2);
        CHECK(std::abs(path[2].s - 2.75) < 1e-14);

        CHECK(pc_minimal_n(0.3, 2.0, 2.5, 2.0, 1, 0.01, 64, &n, path, 70, &path_len,
                           &bootstrap) == PC_ERR_INVALID_ARGUMENT);
        CHECK(std::string(pc_last_error()).find("s0 > 1/p0") != std::string::npos);
    }

    SUBCASE("rasterization") {
        std::vector<uint8_t> flags(40 * 40);
        REQUIRE(pc_rasterize_domains(0.75, 2.0, 1, -1.0, 3.0, 0.0, 1.0, 40,
                                     flags.data(), flags.size()) == PC_OK);
        bool any_a = false;
        for (uint8_t f : flags) {
            if (f & PC_REGION_N) CHECK((f & PC_REGION_LU) != 0);
            if (f & PC_REGION_A) any_a = true;
        }
        CHECK(any_a);
        CHECK(pc_rasterize_domains(0.75, 2.0, 1, -1.0, 3.0, 0.0, 1.0, 40, flags.data(),
                                   10) == PC_ERR_BUFFER_TOO_SMALL);
    }
}
