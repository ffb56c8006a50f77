#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

using namespace morrey;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig line_config(const std::filesystem::path& out) {
  ExperimentConfig c;
  c.n = 1;
  c.ell = 2;
  c.k = 10;
  c.tau = 1e-3;
  c.adaptive = true;
  c.grad_tol_rel = 1e-5;
  c.max_iters = 200000;
  c.out = out;
  return c;
}

int run_cli(const std::string& args, const std::filesystem::path& stdout_path) {
  const std::string cmd = std::string("\"") + MORREY_CLI_PATH + "\" " + args + " > \"" +
                          stdout_path.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Experiment, LineRunRecoversUnitConstant) {
  const auto dir = fixtures::scratch_dir("exp_line");
  const ExperimentResult r = run_experiment(line_config(dir));
  ASSERT_EQ(r.status, kExitOk) << r.message;
  EXPECT_TRUE(r.state.converged);
  EXPECT_NE(r.report.find("check.sharp_constant_1d = "), std::string::npos);
  EXPECT_NE(r.report.find("summary.verdict = pass"), std::string::npos) << r.report;
  const ScalarField f = load_field(r.field_path);
  const ScalarField exact = sample_extremal_1d(f.grid());
  for (std::size_t q = 0; q < f.grid().size(); ++q) {
    EXPECT_NEAR(f.values()[q], exact.values()[q], 2.0 * f.grid().spacing());
  }
  EXPECT_NE(r.report.find("value.holder.c_star_clamp = 1\n"), std::string::npos);
  EXPECT_NE(r.report.find("check.clamp_max_error = "), std::string::npos);
  const HolderReport h = holder_seminorm(f, {4.0}, canonical_constraints(f.grid()), {});
  EXPECT_NEAR(h.c_star_estimate, 1.0, 1e-5);
  EXPECT_TRUE(std::filesystem::exists(r.manifest_path));
  EXPECT_TRUE(r.contour_path.empty());
  EXPECT_EQ(slurp(r.report_path), r.report);
}

TEST(Experiment, ReportsAreReproducible) {
  const auto a = fixtures::scratch_dir("exp_rep_a");
  const auto b = fixtures::scratch_dir("exp_rep_b");
  ExperimentConfig c = line_config(a);
  const ExperimentResult ra = run_experiment(c);
  c.out = b;
  const ExperimentResult rb = run_experiment(c);
  ASSERT_EQ(ra.status, kExitOk);
  ASSERT_EQ(rb.status, kExitOk);
  EXPECT_EQ(slurp(ra.field_path), slurp(rb.field_path));
  const auto strip_out = [](std::string s, const std::filesystem::path& out) {
    const std::string line = "config.out = " + out.string() + "\n";
    s.erase(s.find(line), line.size());
    return s;
  };
  EXPECT_EQ(strip_out(ra.report, a), strip_out(rb.report, b));
}

TEST(Experiment, ResumeMatchesUninterruptedRun) {
  const auto full = fixtures::scratch_dir("exp_full");
  const auto part = fixtures::scratch_dir("exp_part");
  const auto rest = fixtures::scratch_dir("exp_rest");
  ExperimentConfig c;
  c.n = 2;
  c.ell = 2;
  c.k = 2;
  c.tau = 1e-3;
  c.grad_tol_rel = 0.0;
  c.max_iters = 400;
  c.analysis = {};
  c.out = full;
  const ExperimentResult whole = run_experiment(c);
  ASSERT_EQ(whole.status, kExitOk) << whole.message;
  c.max_iters = 150;
  c.out = part;
  const ExperimentResult first = run_experiment(c);
  ASSERT_EQ(first.status, kExitOk);
  c.max_iters = 400;
  c.out = rest;
  c.resume = first.field_path;
  const ExperimentResult second = run_experiment(c);
  ASSERT_EQ(second.status, kExitOk) << second.message;
  EXPECT_EQ(second.state.iteration, 400);
  EXPECT_EQ(slurp(second.field_path), slurp(whole.field_path));
  EXPECT_EQ(slurp(second.contour_path), slurp(whole.contour_path));
}

TEST(Experiment, EmptyAnalysisEchoesConfigOnly) {
  ExperimentConfig c = line_config(fixtures::scratch_dir("exp_none"));
  c.analysis = {};
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.report.find("value."), std::string::npos);
  EXPECT_EQ(r.report.find("summary."), std::string::npos);
  EXPECT_EQ(r.report.rfind("config.adaptive = true\n", 0), 0u);
}

TEST(Experiment, PlanarRunWritesEveryFile) {
  ExperimentConfig c;
  c.ell = 2;
  c.k = 2;
  c.tau = 1e-3;
  c.adaptive = true;
  c.max_iters = 20000;
  c.out = fixtures::scratch_dir("exp_planar");
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.status, kExitOk) << r.message;
  for (const auto& p : {r.field_path, r.contour_path, r.report_path, r.manifest_path}) {
    EXPECT_TRUE(std::filesystem::exists(p)) << p;
  }
  EXPECT_EQ(slurp(r.contour_path).rfind("contours 9\n", 0), 0u);
  EXPECT_EQ(slurp(r.manifest_path).rfind("morrey-manifest 1\n", 0), 0u);
  EXPECT_NE(r.report.find("check.antisymmetry = "), std::string::npos);
  EXPECT_NE(r.report.find("check.energy_nonincreasing = 0 "), std::string::npos);
}

TEST(Experiment, ExitCodes) {
  const auto dir = fixtures::scratch_dir("exp_codes");
  ExperimentConfig bad = line_config(dir);
  bad.p = 0.5;
  EXPECT_EQ(run_experiment(bad).status, kExitValidation);

  ExperimentConfig diverge = line_config(dir);
  diverge.adaptive = false;
  diverge.tau = 10.0;
  EXPECT_EQ(run_experiment(diverge).status, kExitDivergence);

  {
    std::ofstream os(dir / "file");
    os << "x";
  }
  EXPECT_EQ(run_experiment(line_config(dir / "file" / "sub")).status, kExitIo);

  ExperimentConfig missing = line_config(dir);
  missing.resume = dir / "missing.field";
  EXPECT_EQ(run_experiment(missing).status, kExitIo);

  {
    std::ofstream os(dir / "garbage.field");
    os << "not an archive\n";
  }
  ExperimentConfig garbage = line_config(dir);
  garbage.resume = dir / "garbage.field";
  EXPECT_EQ(run_experiment(garbage).status, kExitIo);

  const ExperimentResult ok = run_experiment(line_config(dir / "ok"));
  ASSERT_EQ(ok.status, kExitOk);
  ExperimentConfig mismatch = line_config(dir);
  mismatch.k = 8;
  mismatch.resume = ok.field_path;
  EXPECT_EQ(run_experiment(mismatch).status, kExitValidation);
}

TEST(Cli, RunsAndReportsExitCodes) {
  const auto dir = fixtures::scratch_dir("cli");
  const auto out = dir / "stdout.txt";
  EXPECT_EQ(run_cli("--n 1 --ell 2 --k 10 --tau 1e-3 --adaptive --iters 20000 --out \"" + (dir / "run").string() + "\"", out), 0);
  EXPECT_NE(slurp(out).find("summary.verdict = pass"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "run" / "field.txt"));

  EXPECT_EQ(run_cli("--n 1 --p 0.5 --out \"" + (dir / "bad").string() + "\"", out), 1);
  EXPECT_EQ(run_cli("--no-such-flag", out), 1);
  EXPECT_EQ(run_cli("--n 1 --tau 10 --out \"" + (dir / "div").string() + "\"", out), 2);
  EXPECT_EQ(run_cli("--config \"" + (dir / "missing.cfg").string() + "\"", out), 3);

  EXPECT_EQ(run_cli("--n 1 --ell 3 --print-config", out), 0);
  const ExperimentConfig printed = parse_config(slurp(out));
  EXPECT_EQ(printed.n, 1);
  EXPECT_EQ(printed.ell, 3);
}

TEST(Cli, ChainSubcommand) {
  const auto dir = fixtures::scratch_dir("cli_chain");
  const auto out = dir / "stdout.txt";
  EXPECT_EQ(run_cli("chain --x 3,0 --y -3,0.5 --radius 1", out), 0);
  EXPECT_NE(slurp(out).find("verify count 1 distances 1 balls 1"), std::string::npos);
  EXPECT_EQ(run_cli("chain --x 1,0 --y -3,0 --radius 1", out), 1);
}
