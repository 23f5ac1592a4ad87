#pragma once

#include <map>
#include <memory>
#include <mutex>

namespace udist {

/// Thread-safe memo table: each value is built at most once, by the first
/// caller, while other callers for the same key wait.
template <typename Key, typename Value>
class OnceMap {
 public:
  template <typename Make>
  const Value& get(const Key& key, Make make) const {
    Slot* slot;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto& p = slots_[key];
      if (!p) p = std::make_unique<Slot>();
      slot = p.get();
    }
    std::call_once(slot->once, [&] { slot->value = std::make_unique<Value>(make()); });
    return *slot->value;
  }

 private:
  struct Slot {
    std::once_flag once;
    std::unique_ptr<Value> value;
  };
  mutable std::mutex mutex_;
  mutable std::map<Key, std::unique_ptr<Slot>> slots_;
};

}  // namespace udist
