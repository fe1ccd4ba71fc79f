#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rnlab/cache.hpp"
#include "rnlab/cli.hpp"
#include "rnlab/kloosterman.hpp"

using namespace rnlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rnlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++n;
  }
  return n - 1;  // column header
}

}  // namespace

TEST_CASE("cache round trip") {
  const fs::path dir = scratch("cache");
  const auto ctx = build_context(101);
  save_context(dir, *ctx);
  const auto loaded = load_context(dir, 101);
  REQUIRE(loaded.has_value());
  CHECK((*loaded)->ind == ctx->ind);
  CHECK((*loaded)->inv == ctx->inv);
  CHECK((*loaded)->g == ctx->g);

  const auto group = make_character_group(101);
  const KlTable t = kl_all(3, *group);
  save_kl_table(dir, t);
  const auto lt = load_kl_table(dir, 101, 3);
  REQUIRE(lt.has_value());
  for (i64 x = 1; x < 101; ++x) CHECK((*lt)(x) == t(x));
}

TEST_CASE("cache rejects damaged files and ignores missing ones") {
  const fs::path dir = scratch("cache_bad");
  std::string warning;
  const auto warn = [&](const std::string& w) { warning = w; };
  CHECK_FALSE(load_context(dir, 101, warn).has_value());
  CHECK(warning.empty());

  save_context(dir, *build_context(101));
  const fs::path p = context_cache_path(dir, 101);
  std::string bytes = slurp(p);
  bytes[0] = 'X';
  std::ofstream(p, std::ios::binary) << bytes;
  CHECK_FALSE(load_context(dir, 101, warn).has_value());
  CHECK_FALSE(warning.empty());

  // cached_context falls back to a fresh build and rewrites the file.
  warning.clear();
  const auto rebuilt = cached_context(dir, 101, warn);
  CHECK(rebuilt->q == 101);
  CHECK(load_context(dir, 101).has_value());

  save_context(dir, *build_context(103));
  bytes = slurp(context_cache_path(dir, 103));
  std::ofstream(context_cache_path(dir, 103), std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK_FALSE(load_context(dir, 103, warn).has_value());
}

TEST_CASE("angles emits one row per even primitive character") {
  const Run r = cli({"angles", "--q", "101"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.rfind("# rnlab ", 0) == 0);
  CHECK(data_rows(r.out) == 49);
}

TEST_CASE("nonvanish reports the c(eta) bound") {
  const Run r = cli({"nonvanish", "--q", "101", "--epsilon", "0.01"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("0.040000000000000001") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(cli({"central", "--q", "100"}).code == kExitUsage);
  CHECK(cli({"central"}).code == kExitUsage);
  CHECK(cli({"no-such-command"}).code == kExitUsage);
  CHECK(cli({"mollifier", "--q", "101", "--alpha", "0.7"}).code == kExitUsage);
  CHECK(cli({"central", "--q", "101", "--format", "xml"}).code == kExitUsage);
}

TEST_CASE("verify passes and is reproducible") {
  const Run a = cli({"verify", "--q", "7"});
  CHECK(a.code == kExitPass);
  const Run b = cli({"verify", "--q", "7", "--workers", "4"});
  CHECK(b.code == kExitPass);
  CHECK(cli({"verify", "--q", "7"}).out == a.out);
  CHECK(a.out == b.out);
}

TEST_CASE("file output is byte-identical across runs and worker counts") {
  const fs::path d1 = scratch("out1"), d2 = scratch("out2");
  CHECK(cli({"moments", "--q", "101", "--kind", "second", "--out-dir", d1.string()}).code == kExitPass);
  CHECK(cli({"moments", "--q", "101", "--kind", "second", "--out-dir", d2.string(), "--workers", "4"}).code ==
        kExitPass);
  for (const auto& entry : fs::directory_iterator(d1)) {
    CAPTURE(entry.path().string());
    CHECK(slurp(entry.path()) == slurp(d2 / entry.path().filename()));
  }
  const Run j = cli({"central", "--q", "11", "--format", "json"});
  CHECK(j.code == kExitPass);
  CHECK(j.out.find("\"rows\"") != std::string::npos);
}

TEST_CASE("the installed binary reports exit codes") {
  const std::string bin = RNLAB_CLI_PATH;
  CHECK(WEXITSTATUS(std::system((bin + " verify --q 5 > /dev/null 2>&1").c_str())) == kExitPass);
  CHECK(WEXITSTATUS(std::system((bin + " verify --q 4 > /dev/null 2>&1").c_str())) == kExitUsage);
}
