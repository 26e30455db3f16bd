#include <cstdio>
#include <filesystem>
#include <sstream>

#include "common.hpp"
#include "momentlab/cli.hpp"

using namespace momentlab;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, RunConfig* cfg = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, cfg);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("momentlab_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, VerifyIdentities) {
  const auto r = run({"verify", "identities", "--q", "13"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "identities", "--q", "13", "--bogus"}).code, 2);
  EXPECT_EQ(run({"moment", "dirichlet"}).code, 2);
  EXPECT_EQ(run({"verify", "identities", "--q", "15"}).code, 2);
  EXPECT_EQ(run({"correlation", "scan", "--q", "19", "--kernel", "kl3"}).code, 2);
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("twist-sum"), std::string::npos);
}

TEST(Cli, ScanRowsAndDeterminism) {
  const auto path = temp_path("scan.csv");
  const std::vector<std::string> args = {"--deterministic", "scan",  "--q-list",   "101,211,401,809",
                                         "--experiment",    "cubic", "--out",      path};
  ASSERT_EQ(run(args).code, 0);
  const auto first = slurp(path);
  EXPECT_EQ(count_lines(first), 5U);
  EXPECT_EQ(first.substr(0, first.find('\n')), "q,ell,omega1_idx,omega2_idx,re,im,main_term,defect,seconds");
  ASSERT_EQ(run({"--threads", "1", "--deterministic", "scan", "--q-list", "101,211,401,809", "--experiment", "cubic",
                 "--out", path})
                .code,
            0);
  EXPECT_EQ(slurp(path), first);
  std::remove(path.c_str());
}

TEST(Cli, MomentRows) {
  const auto r = run({"--deterministic", "moment", "dirichlet", "--q", "101", "--omega1", "3", "--omega2", "5", "--ell", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count_lines(r.out), 2U);
  EXPECT_NE(r.out.find("\n101,2,3,5,"), std::string::npos);
  const auto c = run({"moment", "cusp", "--q", "101", "--ell", "5"});
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.err.find("warning"), std::string::npos);
  const auto x = run({"moment", "cross-check", "--q", "101", "--parity", "1"});
  EXPECT_EQ(x.code, 0) << x.out;
  EXPECT_EQ(run({"moment", "cross-check", "--q", "101", "--parity", "2"}).code, 2);
}

TEST(Cli, OtherCommands) {
  EXPECT_EQ(run({"weil-scan", "--q", "101", "--k", "3"}).code, 0);
  EXPECT_EQ(run({"weil-scan", "--q", "101", "--k", "2", "--twists", "1,2"}).code, 0);
  EXPECT_EQ(run({"weil-scan", "--q", "101", "--k", "2", "--twists", "1"}).code, 2);
  const auto l = run({"lvalue", "--q", "101", "--chi", "3"});
  EXPECT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("oracle"), std::string::npos);
  const auto c = run({"correlation", "scan", "--q", "7", "--kernel", "kl2"});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(count_lines(c.out), 7U * 7U * 7U - 7U + 1U);
  const auto t = run({"--deterministic", "twist-sum", "--q", "211"});
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(count_lines(t.out), 2U);
  EXPECT_EQ(run({"twist-sum"}).code, 2);
  const auto sc = run({"--deterministic", "scan", "--q-list", "101,211", "--experiment", "census"});
  EXPECT_EQ(sc.code, 0);
  EXPECT_EQ(count_lines(sc.out), 3U);
  EXPECT_EQ(run({"scan", "--q-list", "101", "--experiment", "nope"}).code, 2);
  const auto cen = run({"census", "--q", "101"});
  EXPECT_EQ(cen.code, 0);
  EXPECT_NE(cen.out.find("proportion"), std::string::npos);
}

TEST(Cli, RunConfigRoundTrip) {
  RunConfig cfg;
  const std::vector<std::string> args = {"--threads", "1", "--deterministic", "moment", "dirichlet",
                                         "--q",       "13", "--ell",          "2"};
  ASSERT_EQ(run(args, &cfg).code, 0);
  EXPECT_EQ(cfg.command, (std::vector<std::string>{"moment", "dirichlet"}));
  EXPECT_EQ(cfg.global.size(), 2U);
  ASSERT_NE(cfg.find("q"), nullptr);
  EXPECT_EQ(*cfg.find("q"), "13");
  RunConfig again;
  ASSERT_EQ(run(cfg.to_argv(), &again).code, 0);
  EXPECT_EQ(again.to_argv(), cfg.to_argv());
  EXPECT_EQ(cfg.to_command_line().rfind("momentlab ", 0), 0U);
}

TEST(Cli, ConfigFile) {
  const auto path = temp_path("run.ini");
  {
    std::ofstream f(path);
    f << "deterministic=true\n";
  }
  const auto r = run({"--config", path, "moment", "dirichlet", "--q", "13"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",0\n"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Io, CsvAndLists) {
  std::ostringstream s;
  CsvWriter w(s, {"a", "b"});
  w.row({"1", "2"});
  EXPECT_EQ(s.str(), "a,b\n1,2\n");
  EXPECT_THROW(w.row({"1"}), std::logic_error);
  EXPECT_EQ(parse_int_list("1,22,,3"), (std::vector<std::int64_t>{1, 22, 3}));
  EXPECT_THROW(parse_int_list("1,x"), std::invalid_argument);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(resolve_character_index("13", 13), 1);
  EXPECT_EQ(resolve_character_index("random:5", 101), resolve_character_index("random:5", 101));
}
