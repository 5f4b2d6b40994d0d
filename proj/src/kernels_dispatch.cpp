#include "minsum/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace minsum::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Table* avx2_table_impl();  // defined in kernels_avx2.cpp
#endif

const Table* avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const Table* detect() {
  const char* env = std::getenv("MINSUM_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar();
  if (env != nullptr && std::strcmp(env, "avx2") == 0) {
    const Table* t = avx2();
    return t != nullptr ? t : &scalar();
  }
  const Table* t = avx2();
  return t != nullptr ? t : &scalar();
}

std::atomic<const Table*> g_forced{nullptr};

}  // namespace

const Table& active() {
  const Table* forced = g_forced.load(std::memory_order_relaxed);
  if (forced != nullptr) return *forced;
  static const Table* detected = detect();
  return *detected;
}

void select(const Table* table) {
  g_forced.store(table, std::memory_order_relaxed);
}

}  // namespace minsum::kernels
