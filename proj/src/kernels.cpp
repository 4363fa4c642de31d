#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "minimax/kernels.hpp"

namespace minimax::kernels {
namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* by_name(std::string_view name) {
  if (name == "scalar") return &scalar();
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2") {
    if (!avx2_supported())
      throw std::runtime_error("kernel backend 'avx2' not supported by this cpu");
    return &avx2();
  }
#endif
  throw std::runtime_error("unknown kernel backend '" + std::string(name) + "'");
}

const Backend* resolve() {
  if (const char* env = std::getenv("MINIMAX_KERNELS")) return by_name(env);
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) return &avx2();
#endif
  return &scalar();
}

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = resolve();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

void select(std::string_view name) {
  g_active.store(by_name(name), std::memory_order_release);
}

}  // namespace minimax::kernels
