#include "cli.hpp"

#include "spdekit/spdekit.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace spdekit;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spdekit_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    mesh_ = make_grid_mesh(0, 1, 0, 1, 10, 10);
    write_text_file(path("square.msh"), save_mesh(mesh_));
    const CounterRng rng(3, streams::kObservations);
    std::ostringstream obs, pts;
    obs << "x,y,value\n";
    pts << "x,y\n";
    for (std::uint64_t i = 0; i < 40; ++i) {
      obs << format_double(rng.uniform(i, 0, 0)) << ',' << format_double(rng.uniform(i, 0, 1)) << ','
          << format_double(rng.normal(i, 1)) << '\n';
      pts << format_double(rng.uniform(i, 2, 0)) << ',' << format_double(rng.uniform(i, 2, 1)) << '\n';
    }
    write_text_file(path("obs.csv"), obs.str());
    write_text_file(path("grid.csv"), pts.str());
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "spdekit");
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  fs::path dir_;
  Mesh mesh_ = make_icosahedron();
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, AssembleWritesMatrixStatsAndManifest) {
  ASSERT_EQ(run({"assemble", "--mesh", path("square.msh"), "--alpha", "2", "--kappa", "2.83", "--tau", "0.4", "--out",
                 path("Q.mtx")}),
            0)
      << err_.str();
  std::istringstream is(read_text_file(path("Q.mtx")));
  const SparseSymMatrix q = read_matrix_market_symmetric(is);
  const FemMatrices fem = assemble_fem(mesh_);
  const SparseSymMatrix ref = build_precision(FieldModel::stationary(mesh_, 2, 2.83, 0.4), fem);
  EXPECT_EQ((q.to_dense() - ref.to_dense()).cwiseAbs().maxCoeff(), 0.0);
  const std::string stats = read_text_file(path("stats.txt"));
  EXPECT_NE(stats.find("n=121"), std::string::npos);
  EXPECT_NE(stats.find("logdet="), std::string::npos);
  const std::string manifest = read_text_file(path("manifest.tsv"));
  EXPECT_EQ(manifest, "Q.mtx\t" + cli::sha256_hex(read_text_file(path("Q.mtx"))) + "\nstats.txt\t" +
                          cli::sha256_hex(stats) + "\n");
}

TEST_F(CliTest, KrigeMatchesLibraryByteForByte) {
  ASSERT_EQ(run({"krige", "--mesh", path("square.msh"), "--alpha", "2", "--kappa", "2.83", "--tau", "0.4", "--obs",
                 path("obs.csv"), "--predict", path("grid.csv"), "--noise-precision", "4", "--out", path("pred.csv")}),
            0)
      << err_.str();
  const Observations obs = parse_observations_csv(read_text_file(path("obs.csv")), 4.0);
  const std::vector<Point> pts = parse_points_csv(read_text_file(path("grid.csv")));
  const SparseSymMatrix q = build_precision(FieldModel::stationary(mesh_, 2, 2.83, 0.4), assemble_fem(mesh_));
  const Posterior post = condition(q, Vector::Zero(q.size()), evaluate_basis(mesh_, obs.locations), obs);
  EXPECT_EQ(read_text_file(path("pred.csv")), prediction_csv(pts, predict(post, mesh_, pts), 2));
}

TEST_F(CliTest, SampleMatchesLibrary) {
  ASSERT_EQ(run({"sample", "--mesh", path("square.msh"), "--kappa", "5", "--seed", "9", "--out", path("s.csv")}), 0)
      << err_.str();
  const CholeskyFactor f =
      CholeskyFactor::factorize(build_precision(FieldModel::stationary(mesh_, 2, 5, 1), assemble_fem(mesh_)));
  EXPECT_EQ(read_text_file(path("s.csv")), vertex_values_csv(f.sample(CounterRng::derive_seed(9, 0))));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  write_text_file(path("run.cfg"), "mesh=" + path("square.msh") + "\nkappa=2.83\ntau=0.4\nout=" + path("a.mtx") + "\n");
  ASSERT_EQ(run({"assemble", "--config", path("run.cfg")}), 0) << err_.str();
  ASSERT_EQ(run({"assemble", "--config", path("run.cfg"), "--tau", "0.8", "--out", path("b.mtx")}), 0) << err_.str();
  std::istringstream a(read_text_file(path("a.mtx")));
  std::istringstream b(read_text_file(path("b.mtx")));
  const DenseMatrix qa = read_matrix_market_symmetric(a).to_dense();
  const DenseMatrix qb = read_matrix_market_symmetric(b).to_dense();
  EXPECT_NEAR((qb - 4.0 * qa).cwiseAbs().maxCoeff(), 0.0, 1e-9 * qa.cwiseAbs().maxCoeff());
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"assemble", "--mesh", path("square.msh"), "--kappa", "-1"}), cli::kExitConfig);
  EXPECT_NE(err_.str().find("kappa"), std::string::npos);
  EXPECT_EQ(run({"nonsense"}), cli::kExitConfig);
  EXPECT_EQ(run({"assemble"}), cli::kExitConfig);
  EXPECT_EQ(run({"assemble", "--mesh", path("missing.msh")}), cli::kExitIo);
  EXPECT_EQ(run({"assemble", "--mesh", path("square.msh"), "--out", "/proc/forbidden/Q.mtx"}), cli::kExitIo);
  EXPECT_EQ(run({"fractional", "--mesh", path("square.msh"), "--alpha", "0.9", "--out", path("f.txt")}),
            cli::kExitConfig);
  write_text_file(path("bad.msh"), "planar\n3\n0 0\n1 0\n2 0\n1\n0 1 2\n");
  EXPECT_EQ(run({"assemble", "--mesh", path("bad.msh")}), cli::kExitConfig);
  // Strong extrapolation of a huge intensity: Newton diverges without an informative prior.
  write_text_file(path("pp.csv"), "x,y\n0.5,0.5\n");
  EXPECT_EQ(run({"lgcp-fit", "--mesh", path("square.msh"), "--pattern", path("pp.csv"), "--tau", "1e-9", "--max-iter",
                 "2", "--out", path("eta.csv")}),
            cli::kExitNumerical);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("krige"), std::string::npos);
}

TEST_F(CliTest, FractionalExport) {
  ASSERT_EQ(run({"fractional", "--mesh", path("square.msh"), "--alpha", "1.5", "--kappa", "5", "--order", "3", "--out",
                 path("frac.txt")}),
            0)
      << err_.str();
  const std::string header = read_text_file(path("frac.txt"));
  EXPECT_NE(header.find("order=3"), std::string::npos);
  EXPECT_NE(header.find("sup_error="), std::string::npos);
  EXPECT_TRUE(fs::exists(path("frac_P.mtx")));
  EXPECT_TRUE(fs::exists(path("frac_Qx.mtx")));
}

TEST_F(CliTest, FitAndLgcpRoundTrip) {
  ASSERT_EQ(run({"fit", "--mesh", path("square.msh"), "--kappa", "4", "--obs", path("obs.csv"), "--max-iter", "80",
                 "--out", path("theta.txt")}),
            0)
      << err_.str();
  EXPECT_NE(read_text_file(path("theta.txt")).find("log_posterior="), std::string::npos);
  EXPECT_TRUE(fs::exists(path("theta_trace.csv")));

  ASSERT_EQ(run({"lgcp-sim", "--mesh", path("square.msh"), "--kappa", "4", "--tau", "0.5", "--mean", "4", "--seed", "2",
                 "--out", path("points.csv")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"lgcp-fit", "--mesh", path("square.msh"), "--kappa", "4", "--tau", "0.5", "--mean", "4", "--pattern",
                 path("points.csv"), "--out", path("eta.csv")}),
            0)
      << err_.str();
  EXPECT_EQ(parse_vertex_values_csv(read_text_file(path("eta.csv"))).size(), mesh_.num_vertices());
}

TEST_F(CliTest, SpaceTimeAndTypeG) {
  ASSERT_EQ(run({"spacetime", "--mesh", path("square.msh"), "--kappa", "4", "--time-steps", "3", "--damping", "0.5",
                 "--dt", "1", "--sample", "--out", path("st.mtx")}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(path("st_sample.csv")));
  EXPECT_EQ(run({"spacetime", "--mesh", path("square.msh"), "--out", path("st2.mtx")}), cli::kExitConfig);
  ASSERT_EQ(run({"typeg-sample", "--mesh", path("square.msh"), "--kappa", "4", "--family", "gal", "--replicates", "2",
                 "--out", path("tg.csv")}),
            0)
      << err_.str();
  EXPECT_EQ(read_text_file(path("tg.csv")).substr(0, 25), "vertex,sample_0,sample_1\n");
  EXPECT_EQ(run({"typeg-sample", "--mesh", path("square.msh"), "--family", "student"}), cli::kExitConfig);
}
