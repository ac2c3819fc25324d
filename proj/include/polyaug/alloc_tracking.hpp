// Copyright 2026 The polyaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYAUG_ALLOC_TRACKING_HPP
#define POLYAUG_ALLOC_TRACKING_HPP

// Process-wide heap accounting used by the benchmark to report peak
// transient allocation of each augmentation path.
//
// The counters are inert until exactly one translation unit of the program
// expands POLYAUG_INSTALL_COUNTING_ALLOCATOR() at namespace scope, which
// replaces the global operator new/delete family.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>

namespace polyaug::alloc {

struct Counters {
  std::atomic<std::int64_t> current{0};
  std::atomic<std::int64_t> peak{0};
  std::atomic<bool> installed{false};
};

inline Counters& counters() noexcept {
  static Counters c;
  return c;
}

inline bool installed() noexcept { return counters().installed.load(std::memory_order_relaxed); }

inline void on_allocate(std::size_t n) noexcept {
  auto& c = counters();
  const auto now = c.current.fetch_add(static_cast<std::int64_t>(n), std::memory_order_relaxed) +
                   static_cast<std::int64_t>(n);
  auto peak = c.peak.load(std::memory_order_relaxed);
  while (now > peak && !c.peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

inline void on_release(std::size_t n) noexcept {
  counters().current.fetch_sub(static_cast<std::int64_t>(n), std::memory_order_relaxed);
}

/// Measures the high-water mark of live heap bytes above the level at
/// construction. Scopes must not overlap.
class PeakScope {
 public:
  PeakScope() noexcept : baseline_(counters().current.load(std::memory_order_relaxed)) {
    counters().peak.store(baseline_, std::memory_order_relaxed);
  }

  std::int64_t peak_bytes() const noexcept {
    if (!installed()) return 0;
    const auto p = counters().peak.load(std::memory_order_relaxed) - baseline_;
    return p > 0 ? p : 0;
  }

 private:
  std::int64_t baseline_;
};

namespace detail {

// 16 bytes keeps the default new alignment of malloc'd blocks.
inline constexpr std::size_t kHeader = 16;

inline void* counted_malloc(std::size_t n) noexcept {
  void* raw = std::malloc(n + kHeader);
  if (!raw) return nullptr;
  *static_cast<std::size_t*>(raw) = n;
  on_allocate(n);
  return static_cast<unsigned char*>(raw) + kHeader;
}

inline void counted_free(void* p) noexcept {
  if (!p) return;
  void* raw = static_cast<unsigned char*>(p) - kHeader;
  on_release(*static_cast<std::size_t*>(raw));
  std::free(raw);
}

inline void* counted_new(std::size_t n) {
  if (void* p = counted_malloc(n == 0 ? 1 : n)) return p;
  throw std::bad_alloc();
}

struct Installer {
  Installer() noexcept { counters().installed.store(true, std::memory_order_relaxed); }
};

}  // namespace detail
}  // namespace polyaug::alloc

#define POLYAUG_INSTALL_COUNTING_ALLOCATOR()                                                   \
  void* operator new(std::size_t n) { return ::polyaug::alloc::detail::counted_new(n); }       \
  void* operator new[](std::size_t n) { return ::polyaug::alloc::detail::counted_new(n); }     \
  void* operator new(std::size_t n, const std::nothrow_t&) noexcept {                          \
    return ::polyaug::alloc::detail::counted_malloc(n == 0 ? 1 : n);                           \
  }                                                                                            \
  void* operator new[](std::size_t n, const std::nothrow_t&) noexcept {                        \
    return ::polyaug::alloc::detail::counted_malloc(n == 0 ? 1 : n);                           \
  }                                                                                            \
  void operator delete(void* p) noexcept { ::polyaug::alloc::detail::counted_free(p); }        \
  void operator delete[](void* p) noexcept { ::polyaug::alloc::detail::counted_free(p); }      \
  void operator delete(void* p, std::size_t) noexcept {                                        \
    ::polyaug::alloc::detail::counted_free(p);                                                 \
  }                                                                                            \
  void operator delete[](void* p, std::size_t) noexcept {                                      \
    ::polyaug::alloc::detail::counted_free(p);                                                 \
  }                                                                                            \
  void operator delete(void* p, const std::nothrow_t&) noexcept {                              \
    ::polyaug::alloc::detail::counted_free(p);                                                 \
  }                                                                                            \
  void operator delete[](void* p, const std::nothrow_t&) noexcept {                            \
    ::polyaug::alloc::detail::counted_free(p);                                                 \
  }                                                                                            \
  namespace polyaug::alloc::detail {                                                           \
  [[maybe_unused]] inline const Installer installer_instance{};                                \
  }

#endif  // POLYAUG_ALLOC_TRACKING_HPP
