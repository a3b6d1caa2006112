// Exercises the installed command line binary end to end. RFNN_CLI_PATH is
// injected by the build so the tests run the binary they were built with.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "rfnn/rng.hpp"

namespace {

#ifndef RFNN_CLI_PATH
#error "RFNN_CLI_PATH must point at the rfnn binary"
#endif

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

CommandResult run_cli(const std::string& args, const std::string& extra_env = "") {
  const std::string out_path = "rfnn_cli_stdout.tmp";
  std::string command = extra_env.empty() ? "" : extra_env + " ";
  command += shell_quote(RFNN_CLI_PATH) + " " + args + " > " + out_path + " 2> rfnn_cli_stderr.tmp";
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
  std::ifstream in(out_path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// well-separated two-cluster data, written once per process
const std::string& data_csv() {
  static const std::string path = [] {
    const std::string p = "rfnn_cli_data.csv";
    rfnn::Rng rng(424242);
    std::ofstream out(p);
    out << "length,entropy,Class\n";
    for (int i = 0; i < 240; ++i) {
      const bool attack = rng.uniform() < 0.5;
      const double length =
          attack ? 90.0 + 20.0 * rng.uniform() : 20.0 + 20.0 * rng.uniform();
      const double entropy = attack ? 4.5 + rng.uniform() : 2.0 + rng.uniform();
      out << length << ',' << entropy << ',' << (attack ? 1 : 0) << '\n';
    }
    return p;
  }();
  return path;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) lines += c == '\n';
  return lines;
}

}  // namespace

TEST_CASE("cli: train writes a model and evaluate reads it back") {
  const auto train = run_cli("train --data " + data_csv() +
                             " --out cli_model.json --b 8 --folds 5 --seed 7");
  REQUIRE(train.exit_code == 0);
  const std::string model_text = read_file("cli_model.json");
  CHECK(model_text.find("rfnn-model/1") != std::string::npos);

  const auto eval = run_cli("evaluate --model cli_model.json --data " + data_csv());
  REQUIRE(eval.exit_code == 0);
  CHECK(eval.output.find("\"accuracy\"") != std::string::npos);
  CHECK(eval.output.find("\"auc\"") != std::string::npos);
  CHECK(eval.output.find("\"sensitivity\"") != std::string::npos);

  const auto text = run_cli("evaluate --model cli_model.json --data " + data_csv() +
                            " --format text");
  REQUIRE(text.exit_code == 0);
  CHECK(text.output.find("accuracy") != std::string::npos);
  CHECK(text.output.find("confusion") != std::string::npos);
}

TEST_CASE("cli: predict emits one row per input sample") {
  run_cli("train --data " + data_csv() + " --out cli_model.json --b 8 --folds 5 --seed 7");
  const auto predict = run_cli("predict --model cli_model.json --data " + data_csv());
  REQUIRE(predict.exit_code == 0);
  CHECK(count_lines(predict.output) == 241);  // header + 240 rows
  CHECK(predict.output.rfind("prediction,score\n", 0) == 0);
  const std::regex row(R"(-?1,-?\d+(\.\d+)?([eE][-+]?\d+)?)");
  std::istringstream lines(predict.output);
  std::string line;
  std::getline(lines, line);  // header
  int checked = 0;
  while (std::getline(lines, line)) {
    CHECK_MESSAGE(std::regex_match(line, row), line);
    ++checked;
  }
  CHECK(checked == 240);
}

TEST_CASE("cli: rules prints one grammar-conformant line per selected neuron") {
  run_cli("train --data " + data_csv() + " --out cli_model.json --b 8 --folds 5 --seed 7");
  const auto rules = run_cli("rules --model cli_model.json");
  REQUIRE(rules.exit_code == 0);
  REQUIRE(count_lines(rules.output) >= 1);
  const std::regex grammar(
      R"(^\d+\. If \([^)]+ is [^)]+\)( (and|or) \([^)]+ is [^)]+\))* with certainly -?\d+\.\d+ then \(SQL Injection Attack is -?\d+\.\d+\)$)");
  std::istringstream lines(rules.output);
  std::string line;
  while (std::getline(lines, line)) {
    CHECK_MESSAGE(std::regex_match(line, grammar), line);
  }

  const auto as_json = run_cli("rules --model cli_model.json --format json");
  REQUIRE(as_json.exit_code == 0);
  CHECK(as_json.output.find("\"certainty\"") != std::string::npos);
}

TEST_CASE("cli: featurize computes statement features") {
  {
    std::ofstream statements("cli_statements.txt");
    statements << "SELECT name FROM users WHERE id = 4\n";
    statements << "' OR '1'='1' --\n";
    statements << "aaaa\n";
  }
  const auto result = run_cli("featurize --input cli_statements.txt");
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.rfind("length,entropy\n", 0) == 0);
  CHECK(count_lines(result.output) == 4);
  // 'aaaa' has zero entropy and length 4
  CHECK(result.output.find("4,0\n") != std::string::npos);
  std::remove("cli_statements.txt");
}

TEST_CASE("cli: exit codes distinguish usage, data, and training failures") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("train --data " + data_csv() + " --out x.json --m 1 --seed 0").exit_code == 1);
  CHECK(run_cli("train --data missing_file.csv --out x.json").exit_code == 2);
  CHECK(run_cli("evaluate --model no_model.json --data " + data_csv()).exit_code == 2);

  // label column mismatch is a data error
  CHECK(run_cli("train --data " + data_csv() + " --out x.json --label NoSuchColumn").exit_code ==
        2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("train --help").exit_code == 0);
}

TEST_CASE("cli: identical seeds give byte-identical models, FNN_SEED as fallback") {
  run_cli("train --data " + data_csv() + " --out cli_a.json --b 8 --folds 5 --seed 99");
  run_cli("train --data " + data_csv() + " --out cli_b.json --b 8 --folds 5 --seed 99");
  CHECK(read_file("cli_a.json") == read_file("cli_b.json"));

  run_cli("train --data " + data_csv() + " --out cli_c.json --b 8 --folds 5 --seed 100");
  CHECK(read_file("cli_a.json") != read_file("cli_c.json"));

  // environment seed matches the equivalent flag seed
  run_cli("train --data " + data_csv() + " --out cli_env.json --b 8 --folds 5",
          "FNN_SEED=99");
  CHECK(read_file("cli_env.json") == read_file("cli_a.json"));
  // the flag wins over the environment
  run_cli("train --data " + data_csv() + " --out cli_flag.json --b 8 --folds 5 --seed 100",
          "FNN_SEED=99");
  CHECK(read_file("cli_flag.json") == read_file("cli_c.json"));
  // a malformed environment seed is a usage error
  CHECK(run_cli("train --data " + data_csv() + " --out x.json", "FNN_SEED=banana").exit_code ==
        1);
}

TEST_CASE("cli: benchmark with a singleton custom grid writes a full report") {
  const auto result = run_cli(
      "benchmark --data " + data_csv() +
      " --grid custom --grid-m 2 --grid-b 4 --grid-rho 0.6 --runs 3 --folds 4 --seed 5"
      " --out cli_bench.json --table cli_table.txt");
  REQUIRE(result.exit_code == 0);
  const std::string report = read_file("cli_bench.json");
  CHECK(report.find("rfnn-benchmark/1") != std::string::npos);
  CHECK(report.find("\"grid\"") != std::string::npos);
  CHECK(report.find("\"runs\"") != std::string::npos);
  CHECK(report.find("\"summary\"") != std::string::npos);

  const std::string table = read_file("cli_table.txt");
  CHECK(table == result.output);
  CHECK(table.find("Model") != std::string::npos);
  CHECK(table.find("Accuracy") != std::string::npos);
  CHECK(table.find("AUC") != std::string::npos);
  CHECK(table.find("Sensitivity") != std::string::npos);
  CHECK(table.find("UNI") != std::string::npos);
  const std::regex mean_std(R"(\d+\.\d{2}\(\d+\.\d{2}\))");
  CHECK(std::regex_search(table, mean_std));
}

TEST_CASE("cli: benchmark reports are byte-identical across invocations") {
  const std::string args =
      "benchmark --data " + data_csv() +
      " --grid custom --grid-m 2 --grid-b 4,8 --grid-rho 0.6 --runs 2 --folds 4 --seed 11";
  run_cli(args + " --out cli_bench_a.json");
  run_cli(args + " --out cli_bench_b.json");
  CHECK(read_file("cli_bench_a.json") == read_file("cli_bench_b.json"));
}
