#include "esym/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace esym::kernels {

namespace {

constexpr Ops kScalarOps{scalar::sum, scalar::sum_and_sumsq,
                         scalar::count_positive, scalar::log_cosh_sum};

#if defined(ESYM_WITH_AVX2)
constexpr Ops kAvx2Ops{avx2::sum, avx2::sum_and_sumsq, avx2::count_positive,
                       avx2::log_cosh_sum};
#endif

#if defined(ESYM_WITH_NEON)
// log_cosh_sum has no NEON variant; the scalar kernel fills the slot.
constexpr Ops kNeonOps{neon::sum, neon::sum_and_sumsq, neon::count_positive,
                       scalar::log_cosh_sum};
#endif

bool cpu_has_avx2() {
#if defined(ESYM_WITH_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("ESYM_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
    if (want == "neon" && backend_available(Backend::neon)) return Backend::neon;
    // unknown or unavailable request: fall through to autodetection
  }
#if defined(ESYM_WITH_AVX2)
  if (cpu_has_avx2()) return Backend::avx2;
#endif
#if defined(ESYM_WITH_NEON)
  return Backend::neon;
#endif
  return Backend::scalar;
}

std::atomic<const Ops*>& active_slot() {
  static std::atomic<const Ops*> slot{nullptr};
  return slot;
}

std::atomic<Backend>& active_backend_slot() {
  static std::atomic<Backend> slot{Backend::scalar};
  return slot;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
    case Backend::neon:
#if defined(ESYM_WITH_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Ops& table(Backend b) {
  switch (b) {
    case Backend::scalar:
      return kScalarOps;
    case Backend::avx2:
#if defined(ESYM_WITH_AVX2)
      if (cpu_has_avx2()) return kAvx2Ops;
#endif
      break;
    case Backend::neon:
#if defined(ESYM_WITH_NEON)
      return kNeonOps;
#else
      break;
#endif
  }
  throw std::invalid_argument("kernel backend not available on this machine");
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "?";
}

const Ops& active() {
  const Ops* ops = active_slot().load(std::memory_order_acquire);
  if (ops == nullptr) {
    Backend b = detect_backend();
    ops = &table(b);
    active_backend_slot().store(b, std::memory_order_relaxed);
    active_slot().store(ops, std::memory_order_release);
  }
  return *ops;
}

Backend active_backend() {
  active();
  return active_backend_slot().load(std::memory_order_relaxed);
}

void force_backend(Backend b) {
  const Ops& ops = table(b);  // throws if unavailable
  active_backend_slot().store(b, std::memory_order_relaxed);
  active_slot().store(&ops, std::memory_order_release);
}

}  // namespace esym::kernels
