#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>

namespace dhdiag::diag {

// Lazily computed values keyed by Key. Concurrent first requests for the same
// key run the computation once; the others wait for it. A computation that
// throws leaves the key empty so a later request retries.
template <typename Key, typename Value>
class SingleFlightMemo {
 public:
  template <typename Fn>
  std::shared_ptr<const Value> get(const Key& key, Fn&& compute) {
    std::shared_ptr<Entry> entry;
    {
      std::lock_guard lock(map_mutex_);
      auto& slot = entries_[key];
      if (!slot) slot = std::make_shared<Entry>();
      entry = slot;
    }
    std::lock_guard lock(entry->mutex);
    if (!entry->value) {
      entry->value = std::make_shared<const Value>(compute());
      ++computations_;
    }
    return entry->value;
  }

  std::size_t computations() const noexcept { return computations_.load(); }

 private:
  struct Entry {
    std::mutex mutex;
    std::shared_ptr<const Value> value;
  };
  std::mutex map_mutex_;
  std::map<Key, std::shared_ptr<Entry>> entries_;
  std::atomic<std::size_t> computations_{0};
};

}  // namespace dhdiag::diag
