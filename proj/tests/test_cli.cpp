// Golden tests for the command line tool: documented invocations, exact
// expected bytes, and determinism across repeated runs. Takes the binary
// path as argv[1].

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::string g_binary;
int g_failures = 0;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = g_binary + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {127, ""};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

void expect(const std::string& what, bool ok) {
  if (!ok) {
    std::cerr << "FAIL: " << what << "\n";
    ++g_failures;
  } else {
    std::cout << "ok: " << what << "\n";
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <theon-binary>\n";
    return 2;
  }
  g_binary = argv[1];

  std::string dir = "/tmp/theon_cli_tests";
  if (std::system(("mkdir -p " + dir).c_str()) != 0) return 2;
  write_file(dir + "/K2.mdl", "model { n = 2  E = (1,2) (2,1) }");
  write_file(dir + "/P3.mdl", "model { n = 3  E = (1,2) (2,1) (2,3) (3,2) }");
  write_file(dir + "/K3.mdl", "model { n = 3  E = (1,2) (2,1) (1,3) (3,1) (2,3) (3,2) }");

  // documented examples
  auto r = run("density --kind p " + dir + "/K2.mdl " + dir + "/P3.mdl");
  expect("density p(K2,P3) = 2/3", r.exit_code == 0 && r.out == "2/3\n");

  r = run("enumerate --theory Tournament --n 3");
  expect("enumerate Tournament n=3 gives 2 records",
         r.exit_code == 0 && std::count(r.out.begin(), r.out.end(), '\n') == 2);

  r = run("exact --theon builtin:constant_graphon:1/2 --model " + dir + "/K3.mdl --kind ind");
  expect("exact t_ind(K3, W_1/2) = 1/8", r.exit_code == 0 && r.out == "1/8\n");

  // determinism: identical bytes across runs, including sampled modes
  auto a = run("sample --theon builtin:turan:3 --n 5 --seed 99");
  auto b = run("sample --theon builtin:turan:3 --n 5 --seed 99");
  expect("sampling is byte-identical for equal seeds", a.exit_code == 0 && a.out == b.out);
  auto c = run("sample --theon builtin:turan:3 --n 5 --seed 100");
  expect("different seeds differ", c.out != a.out);

  auto j1 = run("--jobs 1 exact --theon builtin:turan:3 --model " + dir + "/K3.mdl --kind inj");
  auto j4 = run("--jobs 4 exact --theon builtin:turan:3 --model " + dir + "/K3.mdl --kind inj");
  expect("results independent of --jobs", j1.out == j4.out && j1.out == "2/9\n");

  // exit codes: usage error 2, computational error 1
  r = run("density --kind bogus " + dir + "/K2.mdl " + dir + "/P3.mdl");
  expect("bad kind exits 1 (computational error)", r.exit_code == 1);
  r = run("nonsense-subcommand");
  expect("unknown subcommand exits 2", r.exit_code == 2);
  r = run("sample --theon builtin:turan:3 --n 4");
  expect("sampled mode without seed exits 2", r.exit_code == 2);

  // weak and strong checks
  r = run("check weak --theon builtin:linorder_mod:2");
  expect("weak check passes for linorder_mod(2)", r.exit_code == 0);
  r = run("check strong --theon builtin:linorder_std --trials 500 --seed 5");
  expect("strong check passes for linorder_std", r.exit_code == 0);

  // multi-density and mobius
  write_file(dir + "/I2.mdl", "model { n = 2  E/2 = }");
  r = run("multi-density --of " + dir + "/K2.mdl --of " + dir + "/K2.mdl " + dir + "/P3.mdl");
  expect("multi-density of two K2 in P3 is 0", r.exit_code == 0 && r.out == "0/1\n");
  r = run("mobius --theory Graph " + dir + "/I2.mdl " + dir + "/K2.mdl");
  expect("mobius(I2, K2) = -1", r.exit_code == 0 && r.out == "-1/1\n");

  // interpretation plumbing
  r = run("interpret check --interp builtin:feedback_arc");
  expect("feedback arc interpretation verifies", r.exit_code == 0);
  write_file(dir + "/bogus.interp", "interp { from=Graph to=Orgraph  E(x,y) := E(x,y) }");
  r = run("interpret check --interp " + dir + "/bogus.interp");
  expect("bogus interpretation fails with exit 1", r.exit_code == 1);

  // flag vectors through files
  write_file(dir + "/k2.fv",
             "flagvec { theory=Graph level=2\n  coeff \"n=2;E:(1,2)(2,1)\" = 1/1\n}\n");
  r = run("evaluate --vec " + dir + "/k2.fv --model " + dir + "/P3.mdl");
  expect("evaluate K2 vector on P3", r.exit_code == 0 && r.out == "2/3\n");
  r = run("product --left " + dir + "/k2.fv --right " + dir + "/k2.fv --level 4");
  expect("product command runs", r.exit_code == 0 && !r.out.empty());

  // lineons
  write_file(dir + "/A.lin", "linsubset { n=4 bits=0f0f }");
  write_file(dir + "/f.pat", "pattern { m=2 bits=7 }");
  r = run("lineon density --pattern " + dir + "/f.pat --subset " + dir + "/A.lin --mode exact");
  expect("lineon exact density runs", r.exit_code == 0 && !r.out.empty());
  auto s1 = run("lineon density --pattern " + dir + "/f.pat --subset " + dir +
                "/A.lin --mode sampled --samples 2000 --seed 3");
  auto s2 = run("lineon density --pattern " + dir + "/f.pat --subset " + dir +
                "/A.lin --mode sampled --samples 2000 --seed 3");
  expect("sampled lineon density deterministic", s1.exit_code == 0 && s1.out == s2.out);

  // permuton extraction
  r = run("permuton extract --theon builtin:standard_permuton:identity:2");
  expect("permuton extract identity", r.exit_code == 0 && r.out.find("1/2") != std::string::npos);

  // theories from .thy files
  write_file(dir + "/graph.thy",
             "theory G {\n  language { E/2 }\n  axiom !E(x,x);\n  axiom E(x,y) <-> E(y,x);\n}\n");
  r = run("enumerate --theory " + dir + "/graph.thy --n 3");
  expect("enumerate from a .thy file",
         r.exit_code == 0 && std::count(r.out.begin(), r.out.end(), '\n') == 4);

  // named models on the command line
  r = run("density --kind p named:K2 named:P3");
  expect("named model references", r.exit_code == 0 && r.out == "2/3\n");

  // json mode
  r = run("--json density --kind p " + dir + "/K2.mdl " + dir + "/P3.mdl");
  expect("json output carries value", r.exit_code == 0 && r.out.find("\"2/3\"") != std::string::npos);

  if (g_failures) {
    std::cerr << g_failures << " CLI test(s) failed\n";
    return 1;
  }
  std::cout << "all CLI tests passed\n";
  return 0;
}
