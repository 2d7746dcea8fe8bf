// Checks a small C++ program written against the coroutine host API: two
// tellers deposit into one account. The unlocked version loses an update;
// the locked version never does.
#include <iostream>
#include <memory>

#include "permute/dpor/explorer.hpp"
#include "permute/runtime/host.hpp"

using namespace permute;

namespace {

std::shared_ptr<HostProgram> bank(bool locked) {
  auto teller = [locked](HostContext& ctx) -> HostTask {
    if (locked) co_await ctx.lock("m");
    const auto balance = co_await ctx.read("balance");
    co_await ctx.write("balance", balance + 10);
    if (locked) co_await ctx.unlock("m");
  };
  auto p = std::make_shared<HostProgram>();
  p->mutex("m").var("balance", 100).main([teller](HostContext& ctx) -> HostTask {
    const ThreadId a = co_await ctx.spawn(teller);
    const ThreadId b = co_await ctx.spawn(teller);
    co_await ctx.join(a);
    co_await ctx.join(b);
    // GCC 11 cannot compile a braced list inside a co_await expression.
    std::vector<std::string> reads{"balance"};
    co_await ctx.check([](const SharedVars& v) { return v.at("balance") == 120; }, "balance == 120", reads);
  });
  return p;
}

void show(const char* title, const ExplorationReport& r) {
  std::cout << title << ": traces " << r.traces << ", transitions " << r.total_transitions
            << ", assertion failures " << r.assertion_failures.size() << ", races " << r.data_races.size() << "\n";
  for (const auto& a : r.assertion_failures) std::cout << "  trace " << a.trace << ": " << a.message << "\n";
}

}  // namespace

int main() {
  const auto unlocked = explore(bank(false), {});
  const auto locked = explore(bank(true), {});
  show("unlocked", unlocked);
  show("locked", locked);
  // The demo doubles as a smoke test: the bug must be found, the fix must hold.
  return unlocked.assertion_failures.empty() || !locked.assertion_failures.empty() ? 1 : 0;
}
