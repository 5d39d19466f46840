#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sia/errors.hpp"
#include "sia/rational.hpp"

namespace sia {

// Indices are zero-based throughout the library. Human-facing output (CLI,
// error messages) converts to one-based labels.

struct InterfaceSpec {
  std::string name;
  std::vector<std::int64_t> capacity;   // per resource; 0 means "not offered"
  std::vector<std::int64_t> unit_cost;  // per resource unit
  std::int64_t activation_cost = 0;     // per engaged (interface, service) pair
};

struct ServiceSpec {
  std::string name;
  std::vector<std::int64_t> demand;  // per resource
};

/// Dense overhead tensor indexed [interface][service][resource]. An empty
/// tensor means every coefficient is zero.
using OverheadTensor = std::vector<std::vector<std::vector<Rational>>>;

/// Integer matrix in row-major nested form, e.g. demand[j][k].
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// A service-to-interface assignment problem: I interfaces offering K
/// resources to J services. Immutable once constructed.
class Instance {
 public:
  /// Validates shapes and signs; throws std::invalid_argument on violation.
  Instance(std::vector<std::string> resources, std::vector<InterfaceSpec> interfaces,
           std::vector<ServiceSpec> services, OverheadTensor overhead = {});

  /// Matrix form with generated names ("r1", "if1", "s1", ...).
  static Instance from_matrices(const IntMatrix& capacity, const IntMatrix& unit_cost,
                                const std::vector<std::int64_t>& activation_cost,
                                const IntMatrix& demand, OverheadTensor overhead = {});

  int num_interfaces() const noexcept { return num_interfaces_; }
  int num_services() const noexcept { return num_services_; }
  int num_resources() const noexcept { return num_resources_; }

  std::int64_t capacity(int i, int k) const { return capacity_[index_ik(i, k)]; }
  std::int64_t unit_cost(int i, int k) const { return unit_cost_[index_ik(i, k)]; }
  std::int64_t activation_cost(int i) const { return activation_cost_[static_cast<std::size_t>(i)]; }
  std::int64_t demand(int j, int k) const { return demand_[index_jk(j, k)]; }

  Rational overhead(int i, int j, int k) const;
  /// 1 + a[i][j][k]: capacity consumed per unit served.
  Rational consumption_factor(int i, int j, int k) const { return Rational(1) + overhead(i, j, k); }
  bool has_overhead() const noexcept { return !overhead_.empty(); }
  /// True when some a[i][j][k] with this resource index is nonzero.
  bool has_overhead_on(int k) const;

  /// D_k = sum_j d[j][k].
  std::int64_t total_demand(int k) const;
  /// B_k = sum_i b[i][k].
  std::int64_t total_capacity(int k) const;
  /// sum_k d[j][k].
  std::int64_t service_demand(int j) const;

  IntMatrix demand_matrix() const;
  IntMatrix capacity_matrix() const;
  IntMatrix unit_cost_matrix() const;
  std::vector<std::int64_t> activation_costs() const { return activation_cost_; }
  OverheadTensor overhead_tensor() const;

  const std::vector<std::string>& resource_names() const noexcept { return resource_names_; }
  const std::vector<std::string>& interface_names() const noexcept { return interface_names_; }
  const std::vector<std::string>& service_names() const noexcept { return service_names_; }

  /// Copy with every capacity multiplied by `rounds`.
  Instance with_scaled_capacity(std::int64_t rounds) const;

 private:
  std::size_t index_ik(int i, int k) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(num_resources_) + static_cast<std::size_t>(k);
  }
  std::size_t index_jk(int j, int k) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(num_resources_) + static_cast<std::size_t>(k);
  }
  std::size_t index_ijk(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(num_services_) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(num_resources_) +
           static_cast<std::size_t>(k);
  }

  int num_interfaces_ = 0;
  int num_services_ = 0;
  int num_resources_ = 0;
  std::vector<std::string> resource_names_;
  std::vector<std::string> interface_names_;
  std::vector<std::string> service_names_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::int64_t> unit_cost_;
  std::vector<std::int64_t> activation_cost_;
  std::vector<std::int64_t> demand_;
  std::vector<Rational> overhead_;  // empty when all zero
};

/// Integer tensor x[i][j][k]: units of resource k on interface i used by
/// service j. Entries are signed so that malformed input can be represented
/// and reported by validate().
class Allocation {
 public:
  Allocation() = default;
  Allocation(int num_interfaces, int num_services, int num_resources);
  static Allocation zeros_like(const Instance& inst) {
    return Allocation(inst.num_interfaces(), inst.num_services(), inst.num_resources());
  }

  int num_interfaces() const noexcept { return num_interfaces_; }
  int num_services() const noexcept { return num_services_; }
  int num_resources() const noexcept { return num_resources_; }
  bool matches(const Instance& inst) const noexcept;

  std::int64_t& operator()(int i, int j, int k) { return x_[index(i, j, k)]; }
  std::int64_t operator()(int i, int j, int k) const { return x_[index(i, j, k)]; }

  /// sum_k x[i][j][k].
  std::int64_t slice_total(int i, int j) const;
  bool empty_total() const;

  Allocation& operator+=(const Allocation& other);
  bool operator==(const Allocation&) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(num_services_) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(num_resources_) +
           static_cast<std::size_t>(k);
  }

  int num_interfaces_ = 0;
  int num_services_ = 0;
  int num_resources_ = 0;
  std::vector<std::int64_t> x_;
};

/// A[i][j] = 1 exactly when interface i serves any resource of service j.
class ActivationMatrix {
 public:
  ActivationMatrix(int num_interfaces, int num_services)
      : num_interfaces_(num_interfaces),
        num_services_(num_services),
        flags_(static_cast<std::size_t>(num_interfaces) * static_cast<std::size_t>(num_services), 0) {}

  int num_interfaces() const noexcept { return num_interfaces_; }
  int num_services() const noexcept { return num_services_; }
  bool operator()(int i, int j) const { return flags_[index(i, j)] != 0; }
  void set(int i, int j, bool on = true) { flags_[index(i, j)] = on ? 1 : 0; }
  /// Number of engaged (interface, service) pairs.
  int count() const;
  bool operator==(const ActivationMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(num_services_) + static_cast<std::size_t>(j);
  }

  int num_interfaces_;
  int num_services_;
  std::vector<unsigned char> flags_;
};

struct CostBreakdown {
  std::int64_t utilization = 0;
  std::int64_t activation = 0;
  std::int64_t total = 0;

  bool operator==(const CostBreakdown&) const = default;
};

struct DemandViolation {
  int service;
  int resource;
  std::int64_t served;
  std::int64_t demanded;
};

struct CapacityViolation {
  int interface;
  int resource;
  Rational consumed;  // sum_j (1 + a[i][j][k]) x[i][j][k]
  std::int64_t limit;  // rounds * b[i][k]
};

struct NegativeEntry {
  int interface;
  int service;
  int resource;
  std::int64_t value;
};

/// Outcome of checking an allocation against the demand, capacity and
/// nonnegativity constraints. Each family records its first violation in
/// index order.
struct ValidationReport {
  std::int64_t rounds = 1;
  std::optional<DemandViolation> demand;
  std::optional<CapacityViolation> capacity;
  std::optional<NegativeEntry> negative;

  bool demand_ok() const noexcept { return !demand; }
  bool capacity_ok() const noexcept { return !capacity; }
  bool nonnegativity_ok() const noexcept { return !negative; }
  bool ok() const noexcept { return !demand && !capacity && !negative; }
};

/// Resource whose total demand exceeds `rounds` times its total capacity.
struct ResourceShortfall {
  int resource;
  std::int64_t demand;    // D_k
  std::int64_t capacity;  // B_k
  /// ceil(D_k / B_k), or nullopt when no interface offers the resource.
  std::optional<std::int64_t> rounds_needed;
};

ActivationMatrix activation_matrix(const Allocation& alloc);

/// Utilization plus activation cost. Throws std::invalid_argument when the
/// allocation shape does not match the instance.
CostBreakdown total_cost(const Instance& inst, const Allocation& alloc);

/// Checks demand equality, capacity scaled by `rounds`, and nonnegativity.
/// Throws std::invalid_argument on shape mismatch or rounds < 1.
ValidationReport validate(const Instance& inst, const Allocation& alloc, std::int64_t rounds = 1);

/// Per-resource aggregate test sum_j d[j][k] <= rounds * sum_i b[i][k].
/// Overhead is ignored, so with nonzero overhead this is a necessary
/// condition only.
std::optional<ResourceShortfall> find_shortfall(const Instance& inst, std::int64_t rounds = 1);

bool is_single_round_feasible(const Instance& inst);

/// "infeasible: resource 1 needs ≥ 3 rounds" style error for a shortfall.
InfeasibleError make_infeasible_error(const ResourceShortfall& shortfall);

/// One-line human description of the first violation in a report, or "ok".
std::string describe(const ValidationReport& report);

}  // namespace sia
