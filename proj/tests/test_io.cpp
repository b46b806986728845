#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "snrkit/csv.hpp"
#include "snrkit/report.hpp"
#include "snrkit/synthetic.hpp"

using namespace snrkit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the CLI inside `dir` with stdout and stderr captured.
Run cli(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = "cd '" + dir.string() + "' && '" SNRKIT_CLI "' " + args + " > '" +
                          out.string() + "' 2> '" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("snrkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ErrorCode parse_error(const std::string& text) {
  try {
    std::istringstream in(text);
    (void)read_archive(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected snrkit::Error");
  return ErrorCode::IoError;
}

// Same structure and key order; numbers equal to a relative 1e-9.
void same_shape(const Json& got, const Json& want, const std::string& where) {
  INFO(where);
  REQUIRE(got.type() == want.type());
  if (want.is_object()) {
    REQUIRE(got.size() == want.size());
    auto g = got.begin();
    for (auto w = want.begin(); w != want.end(); ++w, ++g) {
      REQUIRE(g.key() == w.key());
      same_shape(*g, *w, where + "." + w.key());
    }
  } else if (want.is_array()) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      same_shape(got[i], want[i], where + "[" + std::to_string(i) + "]");
  } else if (want.is_number_float()) {
    const double a = got.get<double>(), b = want.get<double>();
    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
  } else {
    CHECK(got == want);
  }
}

}  // namespace

TEST_CASE("numbers round-trip through text") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(z(gen), static_cast<int>(z(gen) * 20));
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-3.0) == "-3");
  CHECK(parse_double("+1.25") == 1.25);
  CHECK(parse_double("1e-3") == 0.001);
  CHECK_THROWS_AS(parse_double("1,5"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
  CHECK_THROWS_AS(parse_double("0.5x"), Error);
}

TEST_CASE("ensemble CSV round trip") {
  const auto a = generate(SyntheticConfig{0.7, 0.8, 5, 30, 3});
  std::stringstream ss;
  write_ensemble_csv(ss, a);
  const auto text = ss.str();
  CHECK(text.rfind("time,y,x1,x2,x3,x4,x5\n", 0) == 0);
  const auto back = read_ensemble_csv(ss);
  CHECK(back.size() == a.size());
  CHECK(std::equal(a.members().begin(), a.members().end(), back.members().begin()));
  CHECK(std::equal(a.verifications().begin(), a.verifications().end(),
                   back.verifications().begin()));
  CHECK(back.times()[29] == "30");

  std::istringstream again(text);
  CHECK(std::holds_alternative<EnsembleArchive>(read_archive(again)));
}

TEST_CASE("binary CSV round trip") {
  const BinaryArchive a({"1990", "1991", "1992"}, {1, 0, 1}, {0.25, 0.0, 1.0});
  std::stringstream ss;
  write_binary_csv(ss, a);
  CHECK(ss.str() == "time,y,p\n1990,1,0.25\n1991,0,0\n1992,1,1\n");
  const auto back = read_archive(ss);
  REQUIRE(std::holds_alternative<BinaryArchive>(back));
  const auto& b = std::get<BinaryArchive>(back);
  CHECK(b.times()[2] == "1992");
  CHECK(b.outcomes()[0] == 1);
  CHECK(b.probabilities()[0] == 0.25);
}

TEST_CASE("CSV reader tolerates CRLF, blank lines and spaces") {
  std::istringstream in("time,y,x1,x2\r\n\r\n2001, 1.5 ,2,3\r\n2002,0,1,-1\r\n\n");
  const auto a = read_ensemble_csv(in);
  CHECK(a.size() == 2);
  CHECK(a.verification(0) == 1.5);
  CHECK(a.times()[1] == "2002");
}

TEST_CASE("CSV reader errors") {
  CHECK(parse_error("") == ErrorCode::ParseError);
  CHECK(parse_error("time,obs,x1,x2\n1,0,1,2\n2,0,1,2\n") == ErrorCode::ParseError);
  CHECK(parse_error("time,y,x1,x3\n1,0,1,2\n2,0,1,2\n") == ErrorCode::ParseError);
  CHECK(parse_error("time,y,x1,x2\n1,0,1,2\n2,0,1\n") == ErrorCode::RaggedRows);
  CHECK(parse_error("time,y,x1,x2\n1,0,1,abc\n2,0,1,2\n") == ErrorCode::ParseError);
  CHECK(parse_error("time,y,x1,x2\n1,0,1,nan\n2,0,1,2\n") == ErrorCode::NonFinite);
  CHECK(parse_error("time,y,x1,x2\n1,0,1,2\n") == ErrorCode::TooShort);
  CHECK(parse_error("time,y,x1\n1,0,1\n2,0,1\n") == ErrorCode::TooShort);
  CHECK(parse_error("time,y,p\n1,2,0.5\n2,0,0.5\n") == ErrorCode::InvalidArgument);
  CHECK(parse_error("time,y,p\n1,1,1.5\n2,0,0.5\n") == ErrorCode::InvalidArgument);
  CHECK_THROWS_AS(read_archive_file("/nonexistent/archive.csv"), Error);
}

TEST_CASE("histogram and replicate exports") {
  BootstrapDistribution d;
  d.replicates = {0.0, 0.25, 1.0};
  std::stringstream h;
  write_histogram_csv(h, histogram(d, 2));
  CHECK(h.str() == "bin_low,bin_high,count\n0,0.5,2\n0.5,1,1\n");
  std::stringstream r;
  write_replicates(r, d);
  CHECK(r.str() == "0\n0.25\n1\n");
}

TEST_CASE("error objects") {
  CHECK(error_json(ErrorCode::RaggedRows, "bad row").dump() ==
        R"({"error":{"code":"RaggedRows","message":"bad row"}})");
  const std::vector<DiagnosticFailure> f{{"rss_crps", ErrorCode::DegenerateClimatology, "x"},
                                         {"rss_ls", ErrorCode::DegenerateBaseRate, "y"},
                                         {"spread_error", ErrorCode::DegenerateClimatology, "z"}};
  const Json j = error_json(f, "incomplete");
  CHECK(j["error"]["code"] == "DegenerateClimatology");
  CHECK(j["error"]["codes"].size() == 2);
  CHECK(j["error"]["quantities"].size() == 3);
}

TEST_CASE("cli synth") {
  TempDir tmp;
  auto r = cli(tmp.path, "synth --phi 0.3pi --c 0.6 --members 25 --length 100 --output a.csv");
  CHECK(r.status == 0);
  CHECK(r.out == "analytic_rpc 1.52\n");
  std::ifstream in(tmp.path / "a.csv");
  const auto a = read_ensemble_csv(in);
  CHECK(a.size() == 100);
  CHECK(a.ensemble_size() + 2 == 27);

  r = cli(tmp.path, "synth --c 1 --output b.csv");
  CHECK(r.out == "analytic_rpc 1.00\n");

  r = cli(tmp.path, "synth --members 2 --length 2 --output c.csv");
  CHECK(r.status == 0);
  std::ifstream small(tmp.path / "c.csv");
  CHECK(read_ensemble_csv(small).size() == 2);

  // radians are accepted as well
  r = cli(tmp.path, "synth --phi 0.9424777960769379 --c 0.6 --output d.csv");
  CHECK(r.out == "analytic_rpc 1.52\n");

  r = cli(tmp.path, "synth --members 1 --output e.csv");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.err)["error"]["code"] == "InvalidArgument");
  CHECK_FALSE(fs::exists(tmp.path / "e.csv"));
}

TEST_CASE("cli analyze matches the golden report") {
  TempDir tmp;
  fs::copy_file(fs::path(SNRKIT_TEST_DATA) / "small.csv", tmp.path / "small.csv");
  const auto r = cli(tmp.path, "analyze --input small.csv");
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  const Json got = Json::parse(r.out);
  const Json want = Json::parse(slurp(fs::path(SNRKIT_TEST_DATA) / "small_analyze.json"));
  same_shape(got, want, "report");
}

TEST_CASE("cli analyze pipeline and failures") {
  TempDir tmp;
  REQUIRE(cli(tmp.path, "synth --c 0.6 --seed 4 --output a.csv").status == 0);
  auto r = cli(tmp.path, "analyze --input a.csv --output report.json --threshold 0.2 --epsilon 0.02");
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  const Json j = Json::parse(slurp(tmp.path / "report.json"));
  CHECK(j["complete"] == true);
  for (const char* key : {"rpc_classical", "rss_crps", "rss_ls", "rss_quadratic"})
    CHECK(std::isfinite(j[key].get<double>()));
  CHECK(j["config"]["threshold"] == 0.2);
  CHECK(j["recalibration"]["logit_ls"]["epsilon"] == 0.02);
  CHECK(j["spread_error"]["mean_ensemble_variance"].get<double>() > 0.0);

  // identical rows with y equal to the row mean
  std::ofstream(tmp.path / "flat.csv") << "time,y,x1,x2\n1,1,1,1\n2,1,1,1\n3,1,1,1\n4,1,1,1\n";
  r = cli(tmp.path, "analyze --input flat.csv");
  CHECK(r.status != 0);
  const Json e = Json::parse(r.err);
  CHECK(e["error"]["codes"].size() >= 2);
  CHECK(r.err.find('\n') == r.err.size() - 1);
  CHECK(Json::parse(r.out)["complete"] == false);

  std::ofstream(tmp.path / "ragged.csv") << "time,y,x1,x2\n1,1,1,1\n2,1,1\n";
  r = cli(tmp.path, "analyze --input ragged.csv");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.err)["error"]["code"] == "RaggedRows");

  r = cli(tmp.path, "analyze --input missing.csv");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.err)["error"]["code"] == "IoError");

  r = cli(tmp.path, "analyze --input a.csv --output no/such/dir/r.json");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.err)["error"]["code"] == "IoError");

  r = cli(tmp.path, "analyze --input a.csv --epsilon 0.7");
  CHECK(r.status == 1);

  r = cli(tmp.path, "analyze --bogus");
  CHECK(r.status == 2);
  CHECK(Json::parse(r.err)["error"]["code"] == "InvalidArgument");

  // binary schema
  std::ofstream(tmp.path / "bin.csv") << "time,y,p\n1,1,0.8\n2,0,0.2\n3,1,0.6\n4,0,0.4\n5,1,0.4\n6,0,0.6\n";
  r = cli(tmp.path, "analyze --input bin.csv");
  CHECK(r.status == 0);
  const Json b = Json::parse(r.out);
  CHECK(b["archive"]["schema"] == "binary");
  CHECK(b["rss_crps"].is_null());
  CHECK(b["rss_ls"].is_number());
}

TEST_CASE("cli bootstrap") {
  TempDir tmp;
  REQUIRE(cli(tmp.path, "synth --c 0.6 --length 40 --seed 2 --output a.csv").status == 0);

  auto r = cli(tmp.path, "bootstrap --input a.csv --output one.json --replicates 1 --seed 3");
  CHECK(r.status == 0);
  const Json one = Json::parse(slurp(tmp.path / "one.json"));
  for (const char* stat : {"rpc_classical", "rss_crps", "rss_ls"}) {
    const auto& qs = one["statistics"][stat]["quantiles"];
    REQUIRE(qs.size() == 3);
    CHECK(qs[0]["value"] == qs[1]["value"]);
    CHECK(qs[1]["value"] == qs[2]["value"]);
  }

  r = cli(tmp.path, "bootstrap --input a.csv --output r.json --replicates 50 --seed 9 --bins 7 "
                    "--quantiles 0.1,0.5,0.9");
  CHECK(r.status == 0);
  const std::string first = slurp(tmp.path / "r.json");
  const std::string hist = slurp(tmp.path / "r_rss_crps_hist.csv");
  const Json j = Json::parse(first);
  CHECK(j["config"]["quantiles"].size() == 3);
  const auto& crps = j["statistics"]["rss_crps"];
  CHECK(crps["replicates_requested"] == 50);
  CHECK(crps["replicates_succeeded"].get<int>() + crps["replicates_failed"].get<int>() == 50);
  CHECK(crps["histogram_file"] == "r_rss_crps_hist.csv");
  CHECK(hist.rfind("bin_low,bin_high,count\n", 0) == 0);
  CHECK(std::count(hist.begin(), hist.end(), '\n') == 8);
  const std::string reps = slurp(tmp.path / "r_rss_crps_replicates.csv");
  CHECK(static_cast<int>(std::count(reps.begin(), reps.end(), '\n')) ==
        crps["replicates_succeeded"].get<int>());

  // byte-identical repeat
  r = cli(tmp.path, "bootstrap --input a.csv --output r.json --replicates 50 --seed 9 --bins 7 "
                    "--quantiles 0.1,0.5,0.9 --threads 1");
  CHECK(slurp(tmp.path / "r.json") == first);
  CHECK(slurp(tmp.path / "r_rss_crps_hist.csv") == hist);

  r = cli(tmp.path, "bootstrap --input a.csv --output q.json --quantiles 0.5,1.5");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.err)["error"]["code"] == "InvalidArgument");

  r = cli(tmp.path, "bootstrap --input a.csv --output z.json --replicates 0");
  CHECK(r.status == 1);
}
