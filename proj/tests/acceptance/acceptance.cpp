// One PASS/FAIL line per acceptance criterion. Exits non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "motionfeas/batch.h"
#include "motionfeas/body_model.h"
#include "motionfeas/contact.h"
#include "motionfeas/dynamic.h"
#include "motionfeas/eval.h"
#include "motionfeas/fixtures.h"
#include "motionfeas/geometry.h"
#include "motionfeas/io.h"
#include "motionfeas/kinematic.h"
#include "motionfeas/nft.h"
#include "motionfeas/reward.h"
#include "oracles.h"

using namespace motionfeas;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;

// Collects sub-check failures for one criterion.
struct Criterion {
  std::string name;
  std::vector<std::string> problems;
  std::string detail;
  Clock::time_point start = Clock::now();

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
  void runtime_below(double limit) {
    const double s = seconds();
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.3f s >= %.0f s", s, limit);
    expect(s < limit, buf);
  }
  void report() {
    const bool ok = problems.empty();
    if (!ok) ++g_failed;
    std::printf("%s  %s", ok ? "PASS" : "FAIL", name.c_str());
    if (!detail.empty()) std::printf(" [%s]", detail.c_str());
    std::printf(" (%.3f s)\n", seconds());
    for (const auto& p : problems) std::printf("        - %s\n", p.c_str());
    std::fflush(stdout);
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool within_ulp(double got, long double exact) {
  const double ref = static_cast<double>(exact);
  return got == ref || got == std::nextafter(ref, 2.0) || got == std::nextafter(ref, -2.0);
}

void score_identities() {
  Criterion c{"score identities on 1000 random reports"};
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    ScoreReport r;
    double* terms[] = {&r.v_vel, &r.v_spen, &r.v_lim, &r.v_slip, &r.v_gpen,
                       &r.v_float, &r.v_bal, &r.s_tau, &r.s_grf, &r.s_met};
    for (double* t : terms) *t = u(rng);
    finalize_report(r);
    using L = long double;
    const L kin = 1.0L - (L(r.v_vel) + L(r.v_spen) + L(r.v_lim)) / 3.0L;
    const L con = 1.0L - (L(r.v_slip) + L(r.v_gpen) + L(r.v_float) + L(r.v_bal)) / 4.0L;
    const L dyn = (L(r.s_tau) + L(r.s_grf) + L(r.s_met)) / 3.0L;
    const L total = (L(r.f_kin) + L(r.f_con) + L(r.f_dyn)) / 3.0L;
    if (!within_ulp(r.f_kin, kin) || !within_ulp(r.f_con, con) || !within_ulp(r.f_dyn, dyn) ||
        !within_ulp(r.r_motion, total)) {
      ++bad;
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " reports off by more than 1 ulp");
  c.detail = std::to_string(1000 - bad) + "/1000 within 1 ulp";
  c.report();
}

void static_pose() {
  Criterion c{"static standing pose scores exactly 1"};
  const auto doc = fixtures::standing(16, true);
  const BodyModel body = body_for_document(doc);
  const auto r = score_trajectory(doc.trajectory, body, &*doc.mesh);
  for (auto name : kTermNames) {
    const double want = name.front() == 's' ? 1.0 : 0.0;
    c.expect(score_field(r, name) == want, std::string(name) + " = " +
                                               fmt("%.17g", score_field(r, name)));
  }
  c.expect(r.r_motion == 1.0, fmt("r_motion = %.17g", r.r_motion));
  c.expect(r.flags.empty(), "unexpected flags");
  c.detail = fmt("r_motion = %.17g", r.r_motion);
  c.runtime_below(1.0);
  c.report();
}

void ballistic() {
  Criterion c{"ballistic trajectory passes the float check with interior |Fz| <= 1 N"};
  const auto doc = fixtures::ballistic(10);
  const BodyModel body = body_for_document(doc);
  const auto contacts = detect_contacts(doc.trajectory, body, nullptr);
  const auto fl = float_violation(doc.trajectory, contacts, body);
  c.expect(fl.forced.count() == 0, std::to_string(fl.forced.count()) + " forced flags");
  c.expect(!fl.runs.empty() && fl.ballistic_ok(), "airborne run not recognized as ballistic");
  const auto grf = grf_estimate(com_trajectory(doc.trajectory, body),
                                doc.trajectory.frame_rate_hz, body);
  double worst = 0.0;
  for (Eigen::Index t = 1; t + 1 < grf.rows(); ++t) worst = std::max(worst, std::abs(grf(t, 2)));
  c.expect(worst <= 1.0, fmt("max interior |Fz| = %.3g N", worst));
  c.detail = fmt("max interior |Fz| = %.3g N", worst);
  c.runtime_below(1.0);
  c.report();
}

void geometry() {
  Criterion c{"BVH, hull and distance match brute-force oracles"};
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::size_t> faces(2, 200);
  std::uniform_real_distribution<double> spread(0.5, 4.0);
  std::size_t mesh_bad = 0, total_pairs = 0;
  for (int m = 0; m < 200; ++m) {
    const auto mesh = oracle::random_soup(rng, faces(rng), spread(rng));
    const auto& v = mesh.vertex_frames.front();
    const auto bvh = TriangleBvh::build(mesh.faces, v);
    const std::size_t fast = intersecting_pairs(bvh, mesh.faces, v);
    const std::size_t slow = oracle::brute_force_pairs(
        mesh.faces, v, exclude_shared_vertex, [&](const Face& a, const Face& b) {
          return triangles_intersect(triangle_of(a, v), triangle_of(b, v));
        });
    total_pairs += slow;
    if (fast != slow) ++mesh_bad;
  }
  c.expect(mesh_bad == 0, std::to_string(mesh_bad) + " meshes with a BVH/brute-force mismatch");
  c.expect(total_pairs > 0, "no intersecting pairs generated");

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t hull_bad = 0;
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    std::vector<oracle::Vec2> pts(3 + s % 40);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto hull = convex_hull_2d(pts);
    const auto edges = oracle::hull_edges(pts);
    bool same = hull.size() == edges.size();
    for (std::size_t i = 0; same && i < hull.size(); ++i) {
      const auto& a = hull.vertices[i];
      const auto& b = hull.vertices[(i + 1) % hull.size()];
      same = std::any_of(edges.begin(), edges.end(),
                         [&](const auto& e) { return e.first == a && e.second == b; });
    }
    if (!same) ++hull_bad;
    for (int q = 0; q < 10; ++q) {
      const oracle::Vec2 p(2.0 * u(rng), 2.0 * u(rng));
      worst = std::max(worst, std::abs(point_polygon_distance(p, hull) -
                                       oracle::hull_distance(p, edges)));
    }
  }
  c.expect(hull_bad == 0, std::to_string(hull_bad) + " hull mismatches");
  c.expect(worst <= 1e-9, fmt("max distance error %.3g", worst));
  c.detail = std::to_string(total_pairs) + " pairs over 200 meshes, max distance error " +
             fmt("%.3g", worst);
  c.runtime_below(60.0);
  c.report();
}

void thresholds() {
  Criterion c{"threshold constants"};
  const BodyModel body = smplx_body();
  const auto near = [&](double got, double want, const std::string& what) {
    c.expect(std::abs(got - want) <= 1e-9, what + fmt(" = %.12g, want %.12g", got, want));
  };
  Eigen::MatrixXd still(5, 3);
  for (int i = 0; i < 5; ++i) still.row(i) << 0.0, 0.0, 1.0;
  near(grf_estimate(still, 16.0, body)(2, 2), 686.7, "stationary Fz");
  Eigen::MatrixXd up(5, 3);
  for (int i = 0; i < 5; ++i) {
    const double t = i / 16.0;
    up.row(i) << 0.0, 0.0, 1.0 + 9.81 * t * t;
  }
  near(grf_estimate(up, 16.0, body)(2, 2), 2060.1, "Fz at +2g");
  near(3.0 * body.body_weight(), 2060.1, "vertical bound");
  near(0.5 * body.body_weight(), 343.35, "horizontal bound");
  near(spen_violation(2.0), 0.0, "spen(2)");
  near(spen_violation(11.0), 0.5, "spen(11)");
  near(spen_violation(20.0), 1.0, "spen(20)");

  MotionTrajectory traj;
  for (int i = 0; i < 3; ++i) traj.frames.push_back({{Vec3(i, 0, 0)}, {Quat::Identity()}});
  for (double met : {0.0, 5000.0, 10000.0}) {
    const auto s = met_score(traj, Eigen::MatrixXd::Constant(3, 1, met / 3.0));
    near(s.met, met, "MET");
    near(s.s_met, 1.0 - met / 10000.0, fmt("s_met(%g)", met));
  }
  c.report();
}

void nft_objective() {
  Criterion c{"NFT objective identity, gradient and worked case"};
  std::mt19937_64 rng(1006);

  // Dyadic inputs keep every product and sum exact, so the identity is
  // checked bit for bit.
  std::uniform_int_distribution<int> grid(-4096, 4096), beta(1, 63);
  std::size_t identity_bad = 0;
  for (int i = 0; i < 100; ++i) {
    nft::PolicyTriple t;
    const auto vec = [&] {
      return Eigen::VectorXd(Eigen::VectorXd::NullaryExpr(6, [&] { return grid(rng) / 1024.0; }));
    };
    t.v_theta = vec();
    t.v_theta_old = vec();
    t.v_target = vec();
    t.beta = beta(rng) / 64.0;
    const auto p = nft::interpolate_policies(t);
    if (((p.v_plus + p.v_minus) / 2.0 - t.v_theta_old).cwiseAbs().maxCoeff() != 0.0) {
      ++identity_bad;
    }
  }
  c.expect(identity_bad == 0, std::to_string(identity_bad) + " triples break (v+ + v-)/2 = v_old");

  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0), b(0.01, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index dim = 1 + i % 8;
    nft::PolicyTriple t;
    const auto vec = [&] {
      return Eigen::VectorXd(Eigen::VectorXd::NullaryExpr(dim, [&] { return n(rng); }));
    };
    t.v_theta = vec();
    t.v_theta_old = vec();
    t.v_target = vec();
    t.beta = b(rng);
    t.r_tilde = u(rng);
    const auto g = nft::loss_gradient(t);
    const auto num = oracle::numeric_gradient(
        [&](const Eigen::VectorXd& x) {
          auto tt = t;
          tt.v_theta = x;
          return nft::policy_loss(tt);
        },
        t.v_theta, 1e-4);
    worst = std::max(worst, (g - num).norm() / std::max(g.norm(), 1e-12));
  }
  c.expect(worst < 1e-5, fmt("max gradient relative error %.3g", worst));

  nft::PolicyTriple w;
  w.v_theta = Eigen::VectorXd::Constant(1, 1.0);
  w.v_theta_old = Eigen::VectorXd::Zero(1);
  w.v_target = Eigen::VectorXd::Zero(1);
  w.beta = 0.1;
  w.r_tilde = 1.0;
  const double loss = nft::policy_loss(w);
  const double grad = nft::loss_gradient(w)(0);
  c.expect(std::abs(loss - 0.01) <= 1e-12, fmt("worked loss %.17g", loss));
  c.expect(std::abs(grad - 0.02) <= 1e-12, fmt("worked gradient %.17g", grad));
  c.detail = fmt("max gradient rel error %.2e, L = %.6g", worst, loss) + fmt(", dL = %.6g", grad);
  c.runtime_below(1.0);
  c.report();
}

eval::PairwiseVote make_vote(std::string prompt, std::string a, std::string b, eval::Outcome o,
                             eval::Question q = eval::Question::kBalance) {
  eval::PairwiseVote v;
  v.pair_id = prompt + a + b;
  v.prompt_id = std::move(prompt);
  v.model_a = std::move(a);
  v.model_b = std::move(b);
  v.outcome = o;
  v.question = q;
  return v;
}

void elo_statistics() {
  Criterion c{"Elo and alignment statistics"};
  using eval::Outcome;
  const std::vector<eval::PairwiseVote> one = {make_vote("p", "A", "B", Outcome::kA)};
  const auto t1 = eval::elo_ratings(one);
  c.expect(t1.rating.at("A") == 1516.0 && t1.rating.at("B") == 1484.0,
           fmt("single game gives %.4f/%.4f", t1.rating.at("A"), t1.rating.at("B")));

  std::vector<eval::PairwiseVote> ties;
  for (int i = 0; i < 50; ++i) ties.push_back(make_vote("p", i % 2 ? "A" : "C", "B", Outcome::kTie));
  for (const auto& [m, r] : eval::elo_ratings(ties).rating) {
    c.expect(r == 1500.0, "tie stream moved " + m);
  }

  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<int> pick(0, 7), out(0, 2);
  std::vector<eval::PairwiseVote> many;
  while (many.size() < 10000) {
    const int a = pick(rng), b = pick(rng);
    if (a != b) {
      many.push_back(make_vote("p", "m" + std::to_string(a), "m" + std::to_string(b),
                               static_cast<Outcome>(out(rng))));
    }
  }
  const auto big = eval::elo_ratings(many);
  const double drift = std::abs(big.total() - 1500.0 * static_cast<double>(big.rating.size()));
  c.expect(drift <= 1e-6, fmt("rating sum drifted by %.3g", drift));

  const std::vector<double> x = {1, 2, 3, 4, 5}, y = {1, 3, 2, 5, 4};
  const double rho = eval::spearman_rho(x, y);
  c.expect(rho == 0.7, fmt("Spearman on the worked 5-point example is %.6f, criterion wants %.1f",
                           rho, 0.7));

  // Votes that follow the metric's own ordering.
  eval::ScoreTable scores;
  std::vector<eval::PairwiseVote> synthetic;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> models = {"a", "b", "c", "d"};
  for (int p = 0; p < 50; ++p) {
    const std::string prompt = "p" + std::to_string(p);
    for (const auto& m : models) scores[{prompt, m}] = u(rng);
    for (std::size_t i = 0; i < models.size(); ++i) {
      for (std::size_t j = i + 1; j < models.size(); ++j) {
        const bool a_wins = scores[{prompt, models[i]}] > scores[{prompt, models[j]}];
        synthetic.push_back(make_vote(prompt, models[i], models[j],
                                      a_wins ? Outcome::kA : Outcome::kB,
                                      eval::kQuestions[static_cast<std::size_t>(p) % 3]));
      }
    }
  }
  const auto report = eval::alignment_report(synthetic, {{"metric", scores}}, {200, 3, 2});
  const auto& all = report.rows.back();
  c.expect(all.agreement && *all.agreement == 1.0, "synthetic agreement below 1");
  c.expect(all.rho && *all.rho == 1.0, "synthetic rho below 1");
  c.detail = fmt("Elo %.0f/%.0f", t1.rating.at("A"), t1.rating.at("B")) +
             fmt(", Spearman example %.6f, rating drift %.2g", rho, drift);
  c.runtime_below(10.0);
  c.report();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

#ifdef MOTIONFEAS_CLI_PATH
int run_cli(const std::string& args) {
  const int raw = std::system((std::string(MOTIONFEAS_CLI_PATH) + " " + args).c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}
#endif

void determinism() {
  Criterion c{"batch output and bootstrap are deterministic"};
  oracle::TempDir dir("acceptance");
  std::filesystem::create_directory(dir / "in");
  for (std::size_t i = 0; i < 50; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "in/m%02zu.%s", i, i % 2 ? "json" : "mft");
    write_motion_file(dir / name, fixtures::swaying(i), i % 2 == 0);
  }
#ifdef MOTIONFEAS_CLI_PATH
  const std::string in = "'" + (dir / "in").string() + "'";
  const int s1 = run_cli("batch " + in + " --workers 1 --out '" + (dir / "w1.csv").string() + "'");
  const int s8 = run_cli("batch " + in + " --workers 8 --out '" + (dir / "w8.csv").string() + "'");
  c.expect(s1 == 0 && s8 == 0, "batch command failed");
  const std::string one = slurp(dir / "w1.csv"), eight = slurp(dir / "w8.csv");
  c.detail = "command line, ";
#else
  const auto files = list_motion_files(dir / "in");
  const auto render = [&](int workers) {
    std::string out = batch_csv_header(false);
    for (const auto& row : run_batch(files, {}, workers)) out += batch_csv_row(row, false);
    return out;
  };
  const std::string one = render(1), eight = render(8);
  c.detail = "library, ";
#endif
  c.expect(!one.empty() && one == eight, "8-worker output differs from 1-worker output");
  c.expect(std::count(one.begin(), one.end(), '\n') == 51, "expected 50 rows");

  std::mt19937_64 rng(1008);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(80), y(80);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = n(rng);
    y[i] = x[i] + n(rng);
  }
  const eval::PairedStatistic rho = [](auto a, auto b) { return eval::spearman_rho(a, b); };
  const double first = eval::bootstrap_std(x, y, rho, {1000, 42, 1});
  const double second = eval::bootstrap_std(x, y, rho, {1000, 42, 1});
  const double threaded = eval::bootstrap_std(x, y, rho, {1000, 42, 8});
  c.expect(std::memcmp(&first, &second, sizeof first) == 0, "bootstrap repeat differs");
  c.expect(std::memcmp(&first, &threaded, sizeof first) == 0, "bootstrap differs across workers");
  c.detail += std::to_string(one.size()) + " bytes, bootstrap std " + fmt("%.6f", first);
  c.report();
}

bool same_document(const MotionDocument& a, const MotionDocument& b) {
  if (a.joint_names != b.joint_names || a.parents != b.parents) return false;
  if (a.trajectory.frame_rate_hz != b.trajectory.frame_rate_hz) return false;
  if (a.trajectory.frames.size() != b.trajectory.frames.size()) return false;
  for (std::size_t t = 0; t < a.trajectory.frames.size(); ++t) {
    const auto& fa = a.trajectory.frames[t];
    const auto& fb = b.trajectory.frames[t];
    if (fa.positions != fb.positions) return false;
    for (std::size_t j = 0; j < fa.rotations.size(); ++j) {
      if (fa.rotations[j].coeffs() != fb.rotations[j].coeffs()) return false;
    }
  }
  if (a.mesh.has_value() != b.mesh.has_value()) return false;
  if (a.mesh && (a.mesh->faces != b.mesh->faces || a.mesh->vertex_frames != b.mesh->vertex_frames)) {
    return false;
  }
  return a.foot_vertex_sets == b.foot_vertex_sets;
}

void round_trip() {
  Criterion c{"JSON and binary containers round-trip the SMPL-X-sized fixture"};
  const auto doc = fixtures::smplx_sized(2);
  c.expect(doc.joint_names.size() == 55 && doc.mesh->vertex_frames[0].size() == 10475 &&
               doc.mesh->faces.size() == 20908,
           "fixture does not have the SMPL-X sizes");
  const auto from_json = parse_motion(to_motion_json(doc));
  const auto from_binary = parse_motion(to_motion_binary(doc));
  c.expect(same_document(doc, from_json), "JSON round trip changed the document");
  c.expect(same_document(doc, from_binary), "binary round trip changed the document");
  c.expect(to_motion_binary(from_binary) == to_motion_binary(doc), "binary bytes not stable");
  c.detail = "55 joints, 10475 vertices, 20908 faces";
  c.report();
}

}  // namespace

int main() {
  score_identities();
  static_pose();
  ballistic();
  geometry();
  thresholds();
  nft_objective();
  elo_statistics();
  determinism();
  round_trip();
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
