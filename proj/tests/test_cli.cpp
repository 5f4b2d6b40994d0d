#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef MINSUM_CLI_PATH
#define MINSUM_CLI_PATH "./minsum"
#endif

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const fs::path out_path = fs::temp_directory_path() / "minsum_cli_out.txt";
  const std::string cmd = std::string(MINSUM_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(raw), ss.str()};
}

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

const char* kTwoNode =
    "problem quadratic v1\nn 2\nA 1 1 2\nA 2 2 2\nA 1 2 1\nb 1 1\n";
const char* kRefuted =
    "problem quadratic v1\nn 3\nA 1 1 1\nA 2 2 1\nA 3 3 1\n"
    "A 1 2 0.6\nA 1 3 0.6\nA 2 3 0.6\nb 1 1\nb 2 1\nb 3 1\n";

}  // namespace

TEST_CASE("cli solve on the running example") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const auto res = run_cli("solve " + file.string() + " --tol 1e-12");
  CHECK(res.code == 0);
  CHECK(res.out.find("0.66666") != std::string::npos);
  CHECK(res.out.find("path quadratic") != std::string::npos);
}

TEST_CASE("cli check composes the whole pipeline") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const auto res = run_cli("check " + file.string());
  CHECK(res.code == 0);
  CHECK(res.out.find("bound eq36: satisfied") != std::string::npos);
}

TEST_CASE("cli certify prints the refutation and exits 1") {
  const auto file = write_temp("minsum_refuted.txt", kRefuted);
  const auto res = run_cli("certify " + file.string());
  CHECK(res.code == 1);
  CHECK(res.out.find("refutation") != std::string::npos);
  CHECK(res.out.find("1.2") != std::string::npos);
}

TEST_CASE("cli reports input errors with exit code 2") {
  const auto res = run_cli("solve /nonexistent/problem.txt");
  CHECK(res.code == 2);
  const auto res2 = run_cli("solve");
  CHECK(res2.code == 2);
  const auto res3 = run_cli("frobnicate");
  CHECK(res3.code == 2);
}

TEST_CASE("cli gen | certify closed loop") {
  const fs::path gen_file = fs::temp_directory_path() / "minsum_gen.txt";
  const auto gen = run_cli("gen --n 10 --degree 3 --lambda 0.6 --seed 7 --out " +
                           gen_file.string());
  CHECK(gen.code == 0);
  const auto cert = run_cli("certify " + gen_file.string());
  CHECK(cert.code == 0);
  CHECK(cert.out.find("certificate exact_quadratic") != std::string::npos);
}

TEST_CASE("cli tree prints the unrolled tree and key-property check") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const auto res = run_cli("tree " + file.string() + " --root 1 --depth 2 --check");
  CHECK(res.code == 0);
  CHECK(res.out.find("projected_nodes 2") != std::string::npos);
  CHECK(res.out.find("diff") != std::string::npos);
}

TEST_CASE("cli bound emits a satisfied report") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const fs::path csv = fs::temp_directory_path() / "minsum_bound.csv";
  const auto res =
      run_cli("bound " + file.string() + " --kind eq36 --out " + csv.string());
  CHECK(res.code == 0);
  CHECK(res.out.find("satisfied at every iteration") != std::string::npos);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,measured,bound,satisfied");
}

TEST_CASE("cli solve surfaces well-posedness aborts with exit 1") {
  const auto file = write_temp("minsum_refuted.txt", kRefuted);
  const auto res = run_cli("solve " + file.string() + " --t-max 200");
  CHECK(res.code == 1);
  CHECK(res.out.find("aborted") != std::string::npos);
}

TEST_CASE("cli message dump on the general path") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const fs::path dir = fs::temp_directory_path() / "minsum_dump";
  fs::remove_all(dir);
  const auto res = run_cli("solve " + file.string() +
                           " --force-general --t-max 3 --grid-points 65 " +
                           "--dump-messages " + dir.string() + " --dump-at 1,2");
  CHECK(res.code == 0);
  CHECK(fs::exists(dir / "msg_t1_1to2.csv"));
  CHECK(fs::exists(dir / "msg_t2_2to1.csv"));
  CHECK_FALSE(fs::exists(dir / "msg_t3_1to2.csv"));
  std::ifstream in(dir / "msg_t1_1to2.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,value,minimizer");
}

TEST_CASE("cli solve trace has the documented schema") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const fs::path csv = fs::temp_directory_path() / "minsum_trace.csv";
  const auto res = run_cli("solve " + file.string() + " --trace-out " +
                           csv.string() + " --full-x");
  CHECK(res.code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x_0,x_1,step_inf,residual_inf,err_weighted,bound_value,grid_points");
}

TEST_CASE("cli rejects a certificate of the wrong dimension") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const auto cert = write_temp("minsum_bad_cert.txt",
                               "certificate v1\nn 3\nlambda 0.5\n"
                               "w 1 1\nw 2 1\nw 3 1\n");
  const auto res =
      run_cli("solve " + file.string() + " --certificate " + cert.string());
  CHECK(res.code == 2);
  CHECK(res.out.find("wrong length") != std::string::npos);
}

TEST_CASE("cli check output is deterministic") {
  const auto file = write_temp("minsum_two_node.txt", kTwoNode);
  const auto a = run_cli("check " + file.string());
  const auto b = run_cli("check " + file.string());
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run_cli("check --seed-count 3 --n 9 --degree 2 --lambda 0.6 --jobs 2");
  const auto d = run_cli("check --seed-count 3 --n 9 --degree 2 --lambda 0.6 --jobs 3");
  CHECK(c.code == 0);
  CHECK(c.out == d.out);  // worker count must not change the report
}
