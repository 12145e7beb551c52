// Copyright 2026 The esslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string_view>

#include "esslab/kernels.hpp"

namespace esslab::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(ESSLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& resolve() {
  if (const char* forced = std::getenv("ESSLAB_KERNELS");
      forced != nullptr && std::string_view{forced} == "scalar") {
    return scalar_kernels();
  }
  if (const KernelTable* avx2 = avx2_kernels(); avx2 != nullptr) {
    return *avx2;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(ESSLAB_HAVE_AVX2)
  static const bool supported = cpu_has_avx2_fma();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace esslab::kernels
