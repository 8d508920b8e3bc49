// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "minsurf/codec.hpp"
#include "minsurf/decoder.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/mesh_check.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/skeleton.hpp"
#include "minsurf/spectral.hpp"
#include "test_helpers.hpp"

using namespace minsurf;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int number, const std::string& name, bool ok, double elapsed) {
    std::printf("[%s] criterion %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                elapsed);
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::vector<double> eigen_oracle(const std::vector<double>& matrix, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = matrix[static_cast<size_t>(i) * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = solver.eigenvalues()[i];
    return values;
}

// 1. Published-row consistency of the aggregate formula.
void criterion_aggregate_row() {
    const auto start = Clock::now();
    const double connect = 0.267, topo = 0.844, position = 0.859, node_num = 1.000;
    const double score = 0.677;
    const double nodesize = (score - node_num * (0.3 * connect + 0.3 * topo + 0.2 * position)) /
                            (node_num * 0.2);
    bool ok = nodesize >= 0.0 && nodesize <= 1.0;
    ok = ok && std::fabs(nodesize - 0.8595) < 5e-4;
    const double forward = aggregate_accuracy(node_num, connect, topo, position, nodesize);
    ok = ok && std::fabs(forward - score) <= 5e-4;
    report(1, "aggregate formula matches the published component row", ok, seconds_since(start));
}

// 2. evaluate_pair(s, s) is the all-ones report.
void criterion_identity_suite() {
    const auto start = Clock::now();
    bool ok = true;
    for (uint64_t seed = 0; seed < 200 && ok; ++seed) {
        RandomSkeletonConfig cfg;
        cfg.max_nodes = 12;
        const std::string text = serialize_text(random_skeleton(seed, cfg));
        const MetricReport r = evaluate_pair(text, text);
        for (double v : {r.node_num_acc, r.se_f1, r.ve_f1, r.connect_acc, r.topology_similarity,
                         r.position_acc, r.nodesize_acc, r.accuracy})
            ok = ok && std::fabs(v - 1.0) <= 1e-9;
        ok = ok && !r.parse_failed;
    }
    const double elapsed = seconds_since(start);
    report(2, "identity suite: 200 seeds score exactly 1", ok && elapsed < 5.0, elapsed);
}

// 3. Metric bounds on 10k perturbed pairs plus a 100k-string parser fuzz.
void criterion_bounds_and_fuzz() {
    const auto start = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(271828);
    auto u01 = [&] { return (rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 10000 && ok; ++trial) {
        RandomSkeletonConfig cfg;
        cfg.max_nodes = 8;
        const Skeleton gt = random_skeleton(trial, cfg);
        Skeleton pred = random_skeleton(trial * 31 + 7, cfg);
        for (SkeletonNode& n : pred.nodes) {
            n.position += Vec3{u01() - 0.5, u01() - 0.5, u01() - 0.5};
            n.size = std::fabs(n.size + 0.25 * (u01() - 0.5));
        }
        const MetricReport r = evaluate_pair(serialize_text(pred), serialize_text(gt));
        for (double v : {r.node_num_acc, r.se_f1, r.ve_f1, r.connect_acc, r.topology_similarity,
                         r.position_acc, r.nodesize_acc, r.accuracy})
            ok = ok && v >= 0.0 && v <= 1.0;
    }
    for (int trial = 0; trial < 100000; ++trial) {
        std::string noise(rng() % 64, '\0');
        for (char& c : noise) c = static_cast<char>(rng() & 0xff);
        try {
            (void)parse_text(noise);
        } catch (const ParseError&) {
        }
    }
    const double elapsed = seconds_since(start);
    report(3, "bounds on 10k perturbed pairs; 100k-string fuzz without aborts",
           ok && elapsed < 60.0, elapsed);
}

// 4. Hungarian cost equals the exhaustive-permutation optimum.
void criterion_matching_oracle() {
    const auto start = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(1618);
    auto u01 = [&] { return (rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 500 && ok; ++trial) {
        const int n_pred = 1 + static_cast<int>(rng() % 7);
        const int n_gt = 1 + static_cast<int>(rng() % 7);
        Skeleton pred, gt;
        for (int i = 0; i < n_pred; ++i)
            pred.nodes.push_back({{u01() * 5, u01() * 5, u01() * 5}, 0.5});
        for (int i = 0; i < n_gt; ++i) gt.nodes.push_back({{u01() * 5, u01() * 5, u01() * 5}, 0.5});
        const Matching m = match_nodes(pred, gt);
        ok = ok && m.cost == test_helpers::brute_force_matching_cost(pred, gt);
    }
    const double elapsed = seconds_since(start);
    report(4, "matching cost equals brute force on 500 instances (n <= 7)", ok && elapsed < 30.0,
           elapsed);
}

// 5. Spectral term against an independent dense eigensolver.
void criterion_spectral_oracle() {
    const auto start = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(6022);
    auto random_graph = [&rng]() {
        SimpleGraph g;
        g.n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j)
                if (rng() % 2) g.edges.push_back(EdgePair(i, j));
        return g;
    };
    auto similarity_from = [](std::vector<double> a, std::vector<double> b) {
        const size_t n = std::max(a.size(), b.size());
        a.insert(a.begin(), n - a.size(), 0.0);
        b.insert(b.begin(), n - b.size(), 0.0);
        double na = 0, nb = 0, diff = 0;
        for (size_t i = 0; i < n; ++i) {
            na += a[i] * a[i];
            nb += b[i] * b[i];
            diff += (a[i] - b[i]) * (a[i] - b[i]);
        }
        const double denom = std::sqrt(std::max(na, nb));
        if (denom == 0.0) return 1.0;
        return std::clamp(1.0 - std::sqrt(diff) / denom, 0.0, 1.0);
    };

    for (int trial = 0; trial < 500 && ok; ++trial) {
        const SimpleGraph ga = random_graph();
        const SimpleGraph gb = random_graph();
        Skeleton sa, sb;
        for (int i = 0; i < ga.n; ++i) sa.nodes.push_back({{double(i), 0, 0}, 1});
        for (int i = 0; i < gb.n; ++i) sb.nodes.push_back({{double(i), 0, 0}, 1});
        sa.solid_edges = ga.edges;
        sb.solid_edges = gb.edges;
        const double ours = topology_similarity(sa, sb);
        const double oracle = similarity_from(eigen_oracle(laplacian_matrix(ga), ga.n),
                                              eigen_oracle(laplacian_matrix(gb), gb.n));
        ok = ok && std::fabs(ours - oracle) < 1e-8;
    }

    Skeleton tri, path;
    for (int i = 0; i < 3; ++i) {
        tri.nodes.push_back({{double(i), double(i * i), 0}, 1});
        path.nodes.push_back({{double(i), 0, 0}, 1});
    }
    tri.solid_edges = {EdgePair(0, 1), EdgePair(1, 2), EdgePair(0, 2)};
    path.solid_edges = {EdgePair(0, 1), EdgePair(1, 2)};
    ok = ok && std::fabs(topology_similarity(tri, path) - (1.0 - 2.0 / std::sqrt(18.0))) <= 1e-9;

    const double elapsed = seconds_since(start);
    report(5, "spectral term matches the dense eigensolver oracle", ok && elapsed < 30.0, elapsed);
}

// 6. Loss endpoints, schedule, monotonicity.
void criterion_loss_endpoints() {
    const auto start = Clock::now();
    bool ok = loss_multiplier(1.0, 0.5) == 1.0 && loss_multiplier(1.0, 1.6) == 1.0;
    ok = ok && loss_multiplier(0.0, 1.6) == 2.6;
    ok = ok && stage_beta(1) == 0.5 && stage_beta(2) == 1.6;
    double prev = loss_multiplier(0.0, 1.6);
    for (int i = 1; i <= 1000; ++i) {
        const double cur = loss_multiplier(i / 1000.0, 1.6);
        ok = ok && cur <= prev;
        prev = cur;
    }
    ok = ok && prev == 1.0;
    report(6, "loss endpoints exact, stage schedule, multiplier monotone", ok,
           seconds_since(start));
}

// 7. Every decoded skeleton is a watertight oriented 2-manifold.
void criterion_decoder_manifold() {
    const auto start = Clock::now();
    bool ok = true;
    double worst = 0.0;
    RandomSkeletonConfig cfg;
    cfg.min_nodes = 2;
    cfg.max_nodes = 8;
    DecodeParams params;  // resolution 64, 200 relaxation iterations
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto t0 = Clock::now();
        const Skeleton skel = random_skeleton(seed, cfg);
        MeshReport r;
        try {
            r = check_mesh(decode(skel, params));
        } catch (const Error& e) {
            std::fprintf(stderr, "decode failed at seed %llu: %s\n",
                         static_cast<unsigned long long>(seed), e.what());
            ok = false;
            break;
        }
        const double dt = seconds_since(t0);
        worst = std::max(worst, dt);
        ok = ok && r.watertight && r.edge_manifold && r.vertex_manifold && r.oriented;
        ok = ok && dt < 30.0;
    }
    std::printf("    decoder: slowest decode %.2fs at resolution %d\n", worst,
                params.grid_resolution);
    report(7, "20/20 random skeletons decode to watertight oriented manifolds", ok,
           seconds_since(start));
}

// 8. Relaxation properties and the sphere curvature estimate.
void criterion_relaxation() {
    const auto start = Clock::now();
    bool ok = true;

    Skeleton cap;
    cap.nodes = {{{0, 0, 0}, 0.4}, {{2, 0, 0}, 0.4}};
    cap.solid_edges = {EdgePair(0, 1)};
    DecodeParams extract;
    extract.grid_resolution = 48;
    extract.relax_iters = 0;
    TriMesh bumpy = decode(cap, extract);
    std::mt19937_64 rng(14);
    auto u01 = [&] { return (rng() >> 11) * 0x1.0p-53; };
    for (Vec3& v : bumpy.vertices) {
        const Vec3 n = normalized(v - closest_point_on_segment(v, {0, 0, 0}, {2, 0, 0}));
        v += ((u01() - 0.5) * 0.02) * n;
    }

    const MeshReport before = check_mesh(bumpy);
    const double h_before = mean_curvature_stats(bumpy).mean_abs;

    TriMesh current = bumpy;
    DecodeParams one;
    one.relax_iters = 1;
    double prev_area = surface_area(current);
    for (int iter = 0; iter < 200 && ok; ++iter) {
        current = relax_curvature(current, cap, one);
        const double area = surface_area(current);
        ok = ok && area <= prev_area + 1e-9;
        prev_area = area;
    }
    const double h_after = mean_curvature_stats(current).mean_abs;
    ok = ok && h_after <= 0.8 * h_before;

    const MeshReport after = check_mesh(current);
    ok = ok && before.vertex_count == after.vertex_count &&
         before.edge_count == after.edge_count && before.face_count == after.face_count;

    ScalarField sphere;
    sphere.bounds = {{-1.4, -1.4, -1.4}, {1.4, 1.4, 1.4}};
    sphere.evaluate = [](Vec3 p) { return norm(p) - 1.0; };
    DecodeParams sphere_params;  // resolution 64
    sphere_params.relax_iters = 0;
    const double h_sphere = mean_curvature_stats(extract_surface(sphere, sphere_params)).mean_abs;
    ok = ok && std::fabs(h_sphere - 1.0) <= 0.05;

    std::printf("    relaxation: mean |H| %.3f -> %.3f; sphere |H| %.4f\n", h_before, h_after,
                h_sphere);
    report(8, "relaxation monotone, curvature drop >= 20%, sphere |H| within 5%", ok,
           seconds_since(start));
}

// 9. Codec roundtrips and exact difference vectors.
void criterion_codec_roundtrips() {
    const auto start = Clock::now();
    bool ok = true;
    for (uint64_t seed = 0; seed < 1000 && ok; ++seed) {
        Skeleton skel = random_skeleton(seed);
        skel.coord_system = (seed % 2) ? CoordSystem::Camera : CoordSystem::Relative;

        const std::string text = serialize_text(skel);
        ok = ok && parse_text(text) == skel && serialize_text(parse_text(text)) == text;

        const std::string json = serialize_json(skel);
        ok = ok && parse_json(json) == skel && serialize_json(parse_json(json)) == json;

        Skeleton cam = skel;
        cam.coord_system = CoordSystem::Camera;
        const Skeleton rel = convert_coords(cam, CoordSystem::Relative);
        for (int i = 0; i < cam.node_count() && ok; ++i)
            for (int j = i + 1; j < cam.node_count() && ok; ++j) {
                const Vec3 a = cam.nodes[i].position - cam.nodes[j].position;
                const Vec3 b = rel.nodes[i].position - rel.nodes[j].position;
                ok = ok && a == b;
            }
    }
    report(9, "1000 skeletons roundtrip bit-exactly; difference vectors exact", ok,
           seconds_since(start));
}

// 10. Batch evaluation determinism and throughput.
void criterion_batch() {
    const auto start = Clock::now();
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> names;
    for (int i = 0; i < 100; ++i) {
        RandomSkeletonConfig cfg;
        cfg.max_nodes = 10;
        const Skeleton gt = random_skeleton(i, cfg);
        const Skeleton pred = random_skeleton(i + 10000, cfg);
        pairs.emplace_back(serialize_text(i % 3 ? gt : pred), serialize_text(gt));
        names.push_back("sample" + std::to_string(i));
    }
    const auto t0 = Clock::now();
    const BatchSummary seq = evaluate_batch(pairs, {}, 1);
    const BatchSummary par = evaluate_batch(pairs, {}, 8);
    const double eval_time = seconds_since(t0);
    bool ok = batch_to_csv(seq, names) == batch_to_csv(par, names);
    ok = ok && batch_to_json(seq, names) == batch_to_json(par, names);
    ok = ok && eval_time < 5.0;
    report(10, "100-pair batch under 5s, byte-identical at 1 and 8 workers", ok,
           seconds_since(start));
}

}  // namespace

int main() {
    criterion_aggregate_row();
    criterion_identity_suite();
    criterion_bounds_and_fuzz();
    criterion_matching_oracle();
    criterion_spectral_oracle();
    criterion_loss_endpoints();
    criterion_decoder_manifold();
    criterion_relaxation();
    criterion_codec_roundtrips();
    criterion_batch();

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
