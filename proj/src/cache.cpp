#include "rnlab/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "rnlab/errors.hpp"

namespace rnlab {

namespace fs = std::filesystem;

namespace {

constexpr char kContextMagic[8] = {'R', 'N', 'L', 'A', 'B', 'C', 'T', 'X'};
constexpr char kKlMagic[8] = {'R', 'N', 'L', 'A', 'B', 'K', 'L', '\0'};

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

class Writer {
 public:
  explicit Writer(const fs::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw ResourceError("cannot write cache file " + path.string());
  }
  void bytes(const void* data, std::size_t n) { out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }
  template <typename T>
  void value(T v) { bytes(&v, sizeof v); }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const fs::path& path) : in_(path, std::ios::binary) {}
  bool ok() const { return static_cast<bool>(in_); }
  bool bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    return static_cast<bool>(in_);
  }
  template <typename T>
  bool value(T& v) { return bytes(&v, sizeof v); }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::ifstream in_;
};

bool read_header(Reader& in, const char (&magic)[8], std::string* why) {
  char got[8];
  unsigned char version = 0;
  if (!in.bytes(got, 8) || std::memcmp(got, magic, 8) != 0) {
    *why = "bad magic bytes";
    return false;
  }
  if (!in.value(version) || version != kCacheVersion) {
    *why = "version mismatch";
    return false;
  }
  return true;
}

// Writes to a sibling temp file first so a crash never leaves a half-written cache entry.
template <typename F>
void atomic_write(const fs::path& path, F&& body) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    Writer w(tmp);
    body(w);
  }
  fs::rename(tmp, path);
}

}  // namespace

fs::path context_cache_path(const fs::path& dir, i64 q) { return dir / ("ctx_" + std::to_string(q) + ".bin"); }

fs::path kl_cache_path(const fs::path& dir, i64 q, int k) {
  return dir / ("kl_" + std::to_string(q) + "_" + std::to_string(k) + ".bin");
}

void save_context(const fs::path& dir, const PrimeContext& ctx) {
  atomic_write(context_cache_path(dir, ctx.q), [&](Writer& w) {
    w.bytes(kContextMagic, 8);
    w.value(kCacheVersion);
    w.value(static_cast<std::uint64_t>(ctx.q));
    for (i64 n = 1; n < ctx.q; ++n) w.value(static_cast<std::int64_t>(ctx.ind[static_cast<std::size_t>(n)]));
    for (i64 n = 1; n < ctx.q; ++n) w.value(static_cast<std::int64_t>(ctx.inv[static_cast<std::size_t>(n)]));
  });
}

void save_kl_table(const fs::path& dir, const KlTable& table) {
  atomic_write(kl_cache_path(dir, table.q, table.k), [&](Writer& w) {
    w.bytes(kKlMagic, 8);
    w.value(kCacheVersion);
    w.value(static_cast<std::uint64_t>(table.q));
    w.value(static_cast<std::uint64_t>(table.k));
    for (i64 x = 1; x < table.q; ++x) {
      w.value(table.values[x].real());
      w.value(table.values[x].imag());
    }
  });
}

std::optional<PrimeContextPtr> load_context(const fs::path& dir, i64 q, const CacheWarning& warn) {
  const fs::path path = context_cache_path(dir, q);
  if (!fs::exists(path)) return std::nullopt;
  auto reject = [&](const std::string& why) {
    if (warn) warn("ignoring cache " + path.string() + ": " + why);
    return std::nullopt;
  };
  Reader in(path);
  std::string why;
  if (!in.ok() || !read_header(in, kContextMagic, &why)) return reject(why.empty() ? "unreadable" : why);
  std::uint64_t stored_q = 0;
  if (!in.value(stored_q) || stored_q != static_cast<std::uint64_t>(q)) return reject("modulus mismatch");
  std::vector<i64> ind(static_cast<std::size_t>(q), -1), inv(static_cast<std::size_t>(q), -1);
  for (auto* table : {&ind, &inv}) {
    for (i64 n = 1; n < q; ++n) {
      std::int64_t v = 0;
      if (!in.value(v)) return reject("truncated");
      (*table)[static_cast<std::size_t>(n)] = v;
    }
  }
  if (!in.at_end()) return reject("trailing bytes");
  // A payload with a valid header can still be damaged; check the tables really are a
  // discrete log and an inverse map before trusting them.
  std::vector<bool> seen(static_cast<std::size_t>(q - 1), false);
  for (i64 n = 1; n < q; ++n) {
    const i64 j = ind[static_cast<std::size_t>(n)];
    const i64 r = inv[static_cast<std::size_t>(n)];
    if (j < 0 || j >= q - 1 || seen[static_cast<std::size_t>(j)]) return reject("corrupt discrete-log table");
    seen[static_cast<std::size_t>(j)] = true;
    if (r < 1 || r >= q || mul_mod(static_cast<u64>(n), static_cast<u64>(r), q) != 1) {
      return reject("corrupt inverse table");
    }
  }
  auto ctx = context_from_tables(q, std::move(ind), std::move(inv));
  for (i64 j = 0; j + 1 < q - 1; ++j) {
    const u64 next = mul_mod(static_cast<u64>(ctx->pow[static_cast<std::size_t>(j)]), static_cast<u64>(ctx->g), q);
    if (static_cast<i64>(next) != ctx->pow[static_cast<std::size_t>(j + 1)]) return reject("corrupt discrete-log table");
  }
  return ctx;
}

std::optional<KlTable> load_kl_table(const fs::path& dir, i64 q, int k, const CacheWarning& warn) {
  const fs::path path = kl_cache_path(dir, q, k);
  if (!fs::exists(path)) return std::nullopt;
  auto reject = [&](const std::string& why) {
    if (warn) warn("ignoring cache " + path.string() + ": " + why);
    return std::nullopt;
  };
  Reader in(path);
  std::string why;
  if (!in.ok() || !read_header(in, kKlMagic, &why)) return reject(why.empty() ? "unreadable" : why);
  std::uint64_t stored_q = 0, stored_k = 0;
  if (!in.value(stored_q) || !in.value(stored_k) || stored_q != static_cast<std::uint64_t>(q) ||
      stored_k != static_cast<std::uint64_t>(k)) {
    return reject("parameter mismatch");
  }
  KlTable table;
  table.q = q;
  table.k = k;
  table.values = Eigen::VectorXcd::Zero(q);
  for (i64 x = 1; x < q; ++x) {
    double re = 0, im = 0;
    if (!in.value(re) || !in.value(im)) return reject("truncated");
    table.values[x] = {re, im};
  }
  if (!in.at_end()) return reject("trailing bytes");
  return table;
}

PrimeContextPtr cached_context(const fs::path& dir, i64 q, const CacheWarning& warn) {
  if (dir.empty()) return build_context(q);
  if (auto hit = load_context(dir, q, warn)) return *hit;
  auto ctx = build_context(q);
  save_context(dir, *ctx);
  return ctx;
}

KlTable cached_kl_table(const fs::path& dir, const CharacterGroup& group, int k, const CacheWarning& warn) {
  if (dir.empty()) return kl_all(k, group);
  if (auto hit = load_kl_table(dir, group.q(), k, warn)) return *hit;
  KlTable table = kl_all(k, group);
  save_kl_table(dir, table);
  return table;
}

}  // namespace rnlab
