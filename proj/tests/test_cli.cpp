#include "subst/cli.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace subst;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Outcome run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::dispatch(args, in, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

Outcome replay(const Json& doc) { return run({"replay"}, doc.dump()); }

std::string big_conjunction(int vars) {
  std::string t;
  for (int i = 0; i < vars; ++i) t += (i ? " & s[0,1] x" : "s[0,1] x") + std::to_string(i) + " & x" + std::to_string(i);
  return t;
}

}  // namespace

TEST(Cli, DecideValidEquation) {
  auto o = run({"decide", "--dim", "2", "--sig", "TA", "s[0,1] s[0,1] x0 = x0", "--json"});
  EXPECT_EQ(o.code, cli::Ok) << o.err;
  auto j = o.json();
  EXPECT_EQ(j["verdict"]["status"], "valid");
  EXPECT_EQ(replay(j).code, cli::Ok);
}

TEST(Cli, DecideInvalidEquationReplays) {
  auto o = run({"decide", "--dim", "2", "--sig", "TA", "s[0,1] x0 = x0", "--json"});
  EXPECT_EQ(o.code, cli::Invalid);
  auto j = o.json();
  EXPECT_EQ(j["verdict"]["status"], "invalid");
  EXPECT_TRUE(j["verdict"]["countermodel"].is_object());
  auto r = replay(j);
  EXPECT_EQ(r.code, cli::Ok) << r.err;
  EXPECT_NE(r.out.find("accepted"), std::string::npos);
}

TEST(Cli, TamperedCertificateIsRejected) {
  auto j = run({"decide", "--dim", "2", "--sig", "TA", "s[0,1] x0 = x0", "--json"}).json();
  auto& x0 = j["verdict"]["countermodel"]["assignment"]["x0"];
  x0 = x0 == "0" ? "f" : "0";
  EXPECT_EQ(replay(j).code, cli::Invalid);
  auto v = run({"decide", "--dim", "2", "--sig", "TA", "s[0,1] s[0,1] x0 = x0", "--json"}).json();
  v["input"] = "s[0,1] x0 = x0";
  EXPECT_EQ(replay(v).code, cli::Invalid);
  EXPECT_EQ(run({"replay"}, "{not json").code, cli::Usage);
}

TEST(Cli, QuasiEquations) {
  auto o = run({"decide", "--dim", "2", "x0 = s[0,1] x0 => s[0,1] x0 = x0", "--json"});
  EXPECT_EQ(o.code, cli::Ok) << o.err;
  EXPECT_EQ(o.json()["kind"], "quasi-equation");
  auto bad = run({"decide", "--dim", "2", "x0 = x1 => x0 = 0", "--json"});
  EXPECT_EQ(bad.code, cli::Invalid);
  EXPECT_EQ(replay(bad.json()).code, cli::Ok);
}

TEST(Cli, DiagonalsUseThePartitionMethod) {
  auto o = run({"decide", "--dim", "3", "--sig", "SAD", "d[0,1] & d[1,2] & ~d[0,2] = 0", "--json"});
  EXPECT_EQ(o.code, cli::Ok) << o.err;
  EXPECT_EQ(o.json()["verdict"]["method"], "partition");
  auto bad = run({"decide", "--dim", "3", "--sig", "SAD", "d[0,1] = d[0,2]", "--json"});
  EXPECT_EQ(bad.code, cli::Invalid);
  EXPECT_EQ(replay(bad.json()).code, cli::Ok);
}

TEST(Cli, CountermodelAndSat) {
  auto cm = run({"countermodel", "--dim", "2", "--sig", "SA", "p0 -> [1/0] p0", "--json"});
  EXPECT_EQ(cm.code, cli::Invalid);
  auto j = cm.json();
  EXPECT_TRUE(j.contains("kripke"));
  EXPECT_EQ(replay(j).code, cli::Ok);
  EXPECT_EQ(run({"countermodel", "--dim", "2", "p0 -> p0"}).code, cli::Ok);

  auto sat = run({"sat", "--dim", "2", "p0 & !<0,1> p0", "--json"});
  EXPECT_EQ(sat.code, cli::Ok);
  auto unsat = run({"sat", "--dim", "2", "p0 & !p0", "--json"});
  EXPECT_EQ(unsat.code, cli::Invalid);
  EXPECT_EQ(replay(unsat.json()).code, cli::Ok);
}

TEST(Cli, Interpolate) {
  auto o = run({"interpolate", "--dim", "2", "x0 & x1", "x1 | x2", "--json"});
  EXPECT_EQ(o.code, cli::Ok) << o.err;
  EXPECT_EQ(o.json()["interpolant"], "x1");
  EXPECT_EQ(replay(o.json()["lower"]).code, cli::Ok);
  auto bad = run({"interpolate", "--dim", "2", "x0", "x1", "--json"});
  EXPECT_EQ(bad.code, cli::Invalid);
  EXPECT_EQ(run({"interpolate", "--dim", "2", "x0 & x1", "x1", "--shared", "x1"}).code, cli::Ok);
}

TEST(Cli, ProveWordEquality) {
  auto eq = run({"prove", "--dim", "3", "s[0,1] s[1,2] s[0,1] = s[1,2] s[0,1] s[1,2]", "--json"});
  EXPECT_EQ(eq.code, cli::Ok) << eq.err;
  EXPECT_EQ(eq.json()["result"], "equal");
  auto sa = run({"prove", "--dim", "2", "--sig", "SA", "s[0/1] s[0,1] = s[1/0] s[0/1]", "--json"});
  EXPECT_NE(sa.code, cli::Usage) << sa.err;
  auto ne = run({"prove", "--dim", "3", "s[0,1] = s[1,2]", "--json"});
  EXPECT_EQ(ne.code, cli::Invalid);
  EXPECT_EQ(replay(ne.json()).code, cli::Ok);
}

TEST(Cli, FreeStats) {
  auto o = run({"free", "--sig", "TA", "--dim", "2", "--gens", "1", "--stats", "--json"});
  EXPECT_EQ(o.code, cli::Ok);
  auto j = o.json();
  EXPECT_EQ(j["alphabet"], 2);
  EXPECT_EQ(j["atoms"], 4);
  EXPECT_EQ(j["cardinality_log2_log2"], 2);
  EXPECT_EQ(run({"free", "--sig", "SA", "--dim", "2", "--gens", "1", "--stats", "--json"}).json()["atoms"], 16);
}

TEST(Cli, VerifyPaperReport) {
  auto o = run({"verify-paper", "--dim-max", "3", "--json"});
  EXPECT_EQ(o.code, cli::Ok) << o.out.substr(0, 400);
  auto j = o.json();
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["non_variety"].size(), 2u);
  EXPECT_TRUE(j.contains("flags"));
}

TEST(Cli, UnknownWhenOverBudget) {
  const auto t = big_conjunction(13);
  auto o = run({"decide", "--dim", "2", t + " = " + t + " | 0", "--json"});
  EXPECT_EQ(o.code, cli::Unknown);
  EXPECT_EQ(o.json()["verdict"]["status"], "unknown");
}

TEST(Cli, UsageErrors) {
  auto p = run({"decide", "--dim", "2", "x0 & = x1"});
  EXPECT_EQ(p.code, cli::Usage);
  EXPECT_NE(p.err.find("position 5"), std::string::npos);
  EXPECT_NE(p.err.find("     ^"), std::string::npos);
  EXPECT_EQ(run({"decide", "--dim", "1", "x0 = x0"}).code, cli::Usage);
  EXPECT_EQ(run({"decide", "--sig", "XY", "x0 = x0"}).code, cli::Usage);
  EXPECT_EQ(run({"decide", "--dim", "2", "s[0/1] x0 = x0"}).code, cli::Usage);
  EXPECT_EQ(run({"decide", "--dim", "2", "--samples", "0", "x0 = x0"}).code, cli::Usage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::Usage);
  EXPECT_EQ(run({}).code, cli::Usage);
  EXPECT_EQ(run({"decide", "--dim", "2"}).code, cli::Usage);
  EXPECT_EQ(run({"--help"}).code, cli::Ok);
}

TEST(Cli, ReadsStdin) {
  auto o = run({"decide", "--dim", "2", "--json"}, "s[0,1] x0 = x0\n");
  EXPECT_EQ(o.code, cli::Invalid);
  EXPECT_EQ(o.json()["input"], "s[0,1] x0 = x0");
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::vector<std::string>> cmds{
      {"decide", "--dim", "3", "--sig", "SA", "s[0/1] x0 & s[1,2] x1 = x1 & s[0/1] x0 | x0", "--json", "--seed", "9"},
      {"decide", "--dim", "3", "--samples", "50", "--budget-assignments", "4", "x0 = s[0,1] x0 => s[1,2] x0 = x0", "--json"},
      {"verify-paper", "--dim-max", "2", "--json", "--seed", "3"},
  };
  for (const auto& c : cmds) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}
