#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "rnlab/arith.hpp"
#include "rnlab/kloosterman.hpp"

namespace rnlab {

inline constexpr unsigned char kCacheVersion = 1;

/// Binary cache files: magic, version byte, little-endian payload.
///   ctx_<q>.bin : "RNLABCTX", version, q (u64), ind[1..q-1], inv[1..q-1] (i64)
///   kl_<q>_<k>.bin : "RNLABKL\0", version, q (u64), k (u64), (re, im) doubles for x = 1..q-1
std::filesystem::path context_cache_path(const std::filesystem::path& dir, i64 q);
std::filesystem::path kl_cache_path(const std::filesystem::path& dir, i64 q, int k);

void save_context(const std::filesystem::path& dir, const PrimeContext& ctx);
void save_kl_table(const std::filesystem::path& dir, const KlTable& table);

using CacheWarning = std::function<void(const std::string&)>;

/// nullopt when the file is missing (silently) or unusable (after calling `warn`).
std::optional<PrimeContextPtr> load_context(const std::filesystem::path& dir, i64 q, const CacheWarning& warn = {});
std::optional<KlTable> load_kl_table(const std::filesystem::path& dir, i64 q, int k, const CacheWarning& warn = {});

/// Load or build and store. An empty `dir` disables caching.
PrimeContextPtr cached_context(const std::filesystem::path& dir, i64 q, const CacheWarning& warn = {});
KlTable cached_kl_table(const std::filesystem::path& dir, const CharacterGroup& group, int k,
                        const CacheWarning& warn = {});

}  // namespace rnlab
