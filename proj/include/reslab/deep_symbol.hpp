#ifndef RESLAB_DEEP_SYMBOL_HPP
#define RESLAB_DEEP_SYMBOL_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "reslab/weight.hpp"

namespace reslab {

// A symbol that can be rebuilt at any requested validity floor.  Derived
// symbols (inverses, iterated ad, compositions) deepen on demand; exact user
// symbols serve every floor as-is.  The deepest materialization is cached
// and reused for shallower requests, which is sound because every operation
// accepts operands certified deeper than required.
class DeepSymbol {
 public:
  DeepSymbol(int rank, int order_bound,
             std::function<ClassicalSymbol(int)> build)
      : rank_(rank),
        ob_(order_bound),
        build_(std::move(build)),
        cache_(std::make_shared<Cache>()) {}

  static DeepSymbol exact(ClassicalSymbol s) {
    const int rank = s.rank();
    const int ob = s.order_bound();
    auto held = std::make_shared<ClassicalSymbol>(std::move(s));
    return DeepSymbol(rank, ob, [held](int floor) {
      if (held->valid_down_to() > floor)
        throw InsufficientDepth(
            "symbol certified only to floor " +
            std::to_string(held->valid_down_to()) + ", requested " +
            std::to_string(floor));
      return *held;
    });
  }

  int rank() const { return rank_; }
  int order_bound() const { return ob_; }

  const ClassicalSymbol& at(int floor) const {
    if (!cache_->valid || cache_->floor > floor) {
      cache_->sym = build_(floor);
      cache_->floor = floor;
      cache_->valid = true;
    }
    return cache_->sym;
  }

 private:
  struct Cache {
    bool valid = false;
    int floor = 0;
    ClassicalSymbol sym;
  };
  int rank_;
  int ob_;
  std::function<ClassicalSymbol(int)> build_;
  std::shared_ptr<Cache> cache_;
};

inline DeepSymbol deep_compose(const DeepSymbol& a, const DeepSymbol& b) {
  const int ob = deg_add(a.order_bound(), b.order_bound());
  return DeepSymbol(a.rank(), ob, [a, b](int floor) {
    return compose(a.at(floor - b.order_bound()),
                   b.at(floor - a.order_bound()), floor);
  });
}

inline DeepSymbol deep_ad_power(const Weight& Q, const DeepSymbol& a, int j) {
  const int ob = deg_add(a.order_bound(), j * (Q.q - 1));
  return DeepSymbol(a.rank(), ob, [Q, a, j](int floor) {
    return ad_power(Q, a.at(floor - j * Q.q), j, floor);
  });
}

inline DeepSymbol deep_power_neg(const Weight& Q, int k) {
  return DeepSymbol(Q.symbol.rank(), -k * Q.q,
                    [Q, k](int floor) { return power_neg(Q, k, floor); });
}

// Left-associated composition of a factor chain, certified above `floor`.
// Factor i is materialized at floor - sum of the other factors' order
// bounds, which the composition floor algebra turns into exactly the
// requested certification.
inline ClassicalSymbol product_at(std::span<const DeepSymbol> factors,
                                  int floor) {
  if (factors.empty()) throw Error("product_at: empty factor list");
  const size_t L = factors.size();
  std::vector<int> suffix(L + 1, 0);
  for (size_t i = L; i-- > 0;)
    suffix[i] = deg_add(suffix[i + 1], factors[i].order_bound());
  ClassicalSymbol g = factors[0].at(floor - suffix[1]);
  if (g.is_zero()) return g;
  int prefix = factors[0].order_bound();
  for (size_t i = 1; i < L; ++i) {
    const ClassicalSymbol& fi = factors[i].at(floor - suffix[i + 1] - prefix);
    g = compose(g, fi, floor - suffix[i + 1]);
    if (g.is_zero()) return g;
    prefix = deg_add(prefix, factors[i].order_bound());
  }
  return g;
}

}  // namespace reslab

#endif
