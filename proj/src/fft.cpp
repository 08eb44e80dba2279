#include "kinavg/fft.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

#include <fftw3.h>

#include "kinavg/errors.hpp"

namespace kinavg {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

}  // namespace

void dft_inplace(std::span<cplx> data, const std::vector<int>& dims, int sign, int inner) {
  require(!dims.empty() && inner >= 1, "bad transform shape");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>()) * std::size_t(inner);
  require(total == data.size(), "transform shape does not match data size");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  // Plans are cached per shape. FFTW_UNALIGNED lets one in-place plan run on
  // any buffer through fftw_execute_dft.
  using Key = std::tuple<std::vector<int>, int, int>;
  static std::map<Key, std::unique_ptr<fftw_plan_s, PlanDeleter>> cache;
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    auto& slot = cache[Key{dims, inner, sign < 0 ? -1 : 1}];
    if (!slot) {
      // FFTW_ESTIMATE never touches the data during planning and makes results
      // independent of timing measurements.
      slot.reset(fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), inner, ptr, nullptr, inner, 1, ptr,
                                    nullptr, inner, 1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
    }
    plan = slot.get();
  }
  if (!plan) throw NumericalError("FFTW could not build a plan");
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace kinavg
