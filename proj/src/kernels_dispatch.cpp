#include <cstdlib>
#include <cstring>
#include <string>

#include "tailproc/errors.hpp"
#include "tailproc/kernels.hpp"

namespace tailproc::kernels {

#if defined(TAILPROC_HAVE_AVX2)
const Impl* avx2_impl_ptr();
#endif
#if defined(TAILPROC_HAVE_NEON)
const Impl* neon_impl_ptr();
#endif

namespace {

std::vector<const Impl*> build_available() {
  std::vector<const Impl*> list;
  list.push_back(&scalar_impl());
#if defined(TAILPROC_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) list.push_back(avx2_impl_ptr());
#endif
#if defined(TAILPROC_HAVE_NEON)
  list.push_back(neon_impl_ptr());
#endif
  return list;
}

const Impl* select_active(const std::vector<const Impl*>& list) {
  const char* env = std::getenv("TAILPROC_SIMD");
  if (env == nullptr || *env == '\0' || std::strcmp(env, "auto") == 0)
    return list.back();
  for (const Impl* impl : list)
    if (std::strcmp(env, impl->name) == 0) return impl;
  throw invalid_parameter(std::string("TAILPROC_SIMD: unknown or unavailable "
                                      "implementation '") +
                          env + "'");
}

}  // namespace

const std::vector<const Impl*>& available() {
  static const std::vector<const Impl*> list = build_available();
  return list;
}

const Impl& active() {
  static const Impl* impl = select_active(available());
  return *impl;
}

}  // namespace tailproc::kernels
