#include "sia/model.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace sia {
namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

void check_shape(const Instance& inst, const Allocation& alloc) {
  if (!alloc.matches(inst)) {
    std::ostringstream os;
    os << "allocation shape " << alloc.num_interfaces() << "x" << alloc.num_services() << "x"
       << alloc.num_resources() << " does not match instance " << inst.num_interfaces() << "x"
       << inst.num_services() << "x" << inst.num_resources();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Instance::Instance(std::vector<std::string> resources, std::vector<InterfaceSpec> interfaces,
                   std::vector<ServiceSpec> services, OverheadTensor overhead)
    : num_interfaces_(static_cast<int>(interfaces.size())),
      num_services_(static_cast<int>(services.size())),
      num_resources_(static_cast<int>(resources.size())),
      resource_names_(std::move(resources)) {
  require(num_resources_ > 0, "instance needs at least one resource");
  require(num_interfaces_ > 0, "instance needs at least one interface");
  const auto K = static_cast<std::size_t>(num_resources_);

  for (int i = 0; i < num_interfaces_; ++i) {
    const auto& spec = interfaces[static_cast<std::size_t>(i)];
    const std::string where = "interface " + std::to_string(i + 1);
    require(spec.capacity.size() == K, where + ": capacity has wrong length");
    require(spec.unit_cost.size() == K, where + ": unit_cost has wrong length");
    require(spec.activation_cost >= 0, where + ": negative activation cost");
    for (std::size_t k = 0; k < K; ++k) {
      require(spec.capacity[k] >= 0, where + ": negative capacity");
      require(spec.unit_cost[k] >= 0, where + ": negative unit cost");
    }
    interface_names_.push_back(spec.name.empty() ? "if" + std::to_string(i + 1) : spec.name);
    capacity_.insert(capacity_.end(), spec.capacity.begin(), spec.capacity.end());
    unit_cost_.insert(unit_cost_.end(), spec.unit_cost.begin(), spec.unit_cost.end());
    activation_cost_.push_back(spec.activation_cost);
  }

  for (int j = 0; j < num_services_; ++j) {
    const auto& spec = services[static_cast<std::size_t>(j)];
    const std::string where = "service " + std::to_string(j + 1);
    require(spec.demand.size() == K, where + ": demand has wrong length");
    for (auto d : spec.demand) require(d >= 0, where + ": negative demand");
    service_names_.push_back(spec.name.empty() ? "s" + std::to_string(j + 1) : spec.name);
    demand_.insert(demand_.end(), spec.demand.begin(), spec.demand.end());
  }

  if (!overhead.empty()) {
    require(overhead.size() == static_cast<std::size_t>(num_interfaces_), "overhead: wrong interface dimension");
    bool any_nonzero = false;
    std::vector<Rational> flat;
    flat.reserve(static_cast<std::size_t>(num_interfaces_) * static_cast<std::size_t>(num_services_) * K);
    for (const auto& per_interface : overhead) {
      require(per_interface.size() == static_cast<std::size_t>(num_services_), "overhead: wrong service dimension");
      for (const auto& per_service : per_interface) {
        require(per_service.size() == K, "overhead: wrong resource dimension");
        for (const auto& a : per_service) {
          require(a >= 0, "overhead: negative coefficient");
          any_nonzero = any_nonzero || a != Rational(0);
          flat.push_back(a);
        }
      }
    }
    if (any_nonzero) overhead_ = std::move(flat);
  }

  for (std::size_t k = 0; k < K; ++k) {
    if (resource_names_[k].empty()) resource_names_[k] = "r" + std::to_string(k + 1);
  }
}

Instance Instance::from_matrices(const IntMatrix& capacity, const IntMatrix& unit_cost,
                                 const std::vector<std::int64_t>& activation_cost, const IntMatrix& demand,
                                 OverheadTensor overhead) {
  require(!capacity.empty(), "instance needs at least one interface");
  require(unit_cost.size() == capacity.size() && activation_cost.size() == capacity.size(),
          "interface matrices disagree on interface count");
  const auto K = capacity.front().size();
  std::vector<InterfaceSpec> interfaces;
  for (std::size_t i = 0; i < capacity.size(); ++i) {
    interfaces.push_back({"if" + std::to_string(i + 1), capacity[i], unit_cost[i], activation_cost[i]});
  }
  std::vector<ServiceSpec> services;
  for (std::size_t j = 0; j < demand.size(); ++j) {
    services.push_back({"s" + std::to_string(j + 1), demand[j]});
  }
  return Instance(numbered("r", static_cast<int>(K)), std::move(interfaces), std::move(services),
                  std::move(overhead));
}

Rational Instance::overhead(int i, int j, int k) const {
  if (overhead_.empty()) return Rational(0);
  return overhead_[index_ijk(i, j, k)];
}

bool Instance::has_overhead_on(int k) const {
  if (overhead_.empty()) return false;
  for (int i = 0; i < num_interfaces_; ++i) {
    for (int j = 0; j < num_services_; ++j) {
      if (overhead_[index_ijk(i, j, k)] != Rational(0)) return true;
    }
  }
  return false;
}

std::int64_t Instance::total_demand(int k) const {
  std::int64_t sum = 0;
  for (int j = 0; j < num_services_; ++j) sum += demand(j, k);
  return sum;
}

std::int64_t Instance::total_capacity(int k) const {
  std::int64_t sum = 0;
  for (int i = 0; i < num_interfaces_; ++i) sum += capacity(i, k);
  return sum;
}

std::int64_t Instance::service_demand(int j) const {
  std::int64_t sum = 0;
  for (int k = 0; k < num_resources_; ++k) sum += demand(j, k);
  return sum;
}

IntMatrix Instance::demand_matrix() const {
  IntMatrix d(static_cast<std::size_t>(num_services_));
  for (int j = 0; j < num_services_; ++j) {
    for (int k = 0; k < num_resources_; ++k) d[static_cast<std::size_t>(j)].push_back(demand(j, k));
  }
  return d;
}

IntMatrix Instance::capacity_matrix() const {
  IntMatrix b(static_cast<std::size_t>(num_interfaces_));
  for (int i = 0; i < num_interfaces_; ++i) {
    for (int k = 0; k < num_resources_; ++k) b[static_cast<std::size_t>(i)].push_back(capacity(i, k));
  }
  return b;
}

IntMatrix Instance::unit_cost_matrix() const {
  IntMatrix c(static_cast<std::size_t>(num_interfaces_));
  for (int i = 0; i < num_interfaces_; ++i) {
    for (int k = 0; k < num_resources_; ++k) c[static_cast<std::size_t>(i)].push_back(unit_cost(i, k));
  }
  return c;
}

OverheadTensor Instance::overhead_tensor() const {
  if (overhead_.empty()) return {};
  OverheadTensor a(static_cast<std::size_t>(num_interfaces_),
                   std::vector<std::vector<Rational>>(static_cast<std::size_t>(num_services_)));
  for (int i = 0; i < num_interfaces_; ++i) {
    for (int j = 0; j < num_services_; ++j) {
      for (int k = 0; k < num_resources_; ++k) {
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(overhead(i, j, k));
      }
    }
  }
  return a;
}

Instance Instance::with_scaled_capacity(std::int64_t rounds) const {
  require(rounds >= 1, "rounds must be positive");
  Instance scaled = *this;
  for (auto& b : scaled.capacity_) b *= rounds;
  return scaled;
}

Allocation::Allocation(int num_interfaces, int num_services, int num_resources)
    : num_interfaces_(num_interfaces),
      num_services_(num_services),
      num_resources_(num_resources),
      x_(static_cast<std::size_t>(num_interfaces) * static_cast<std::size_t>(num_services) *
             static_cast<std::size_t>(num_resources),
         0) {
  require(num_interfaces >= 0 && num_services >= 0 && num_resources >= 0, "negative allocation dimension");
}

bool Allocation::matches(const Instance& inst) const noexcept {
  return num_interfaces_ == inst.num_interfaces() && num_services_ == inst.num_services() &&
         num_resources_ == inst.num_resources();
}

std::int64_t Allocation::slice_total(int i, int j) const {
  std::int64_t sum = 0;
  for (int k = 0; k < num_resources_; ++k) sum += (*this)(i, j, k);
  return sum;
}

bool Allocation::empty_total() const {
  for (auto v : x_) {
    if (v != 0) return false;
  }
  return true;
}

Allocation& Allocation::operator+=(const Allocation& other) {
  require(num_interfaces_ == other.num_interfaces_ && num_services_ == other.num_services_ &&
              num_resources_ == other.num_resources_,
          "allocation shapes differ");
  for (std::size_t n = 0; n < x_.size(); ++n) x_[n] += other.x_[n];
  return *this;
}

int ActivationMatrix::count() const {
  int n = 0;
  for (auto f : flags_) n += f;
  return n;
}

ActivationMatrix activation_matrix(const Allocation& alloc) {
  ActivationMatrix a(alloc.num_interfaces(), alloc.num_services());
  for (int i = 0; i < alloc.num_interfaces(); ++i) {
    for (int j = 0; j < alloc.num_services(); ++j) {
      if (alloc.slice_total(i, j) > 0) a.set(i, j);
    }
  }
  return a;
}

CostBreakdown total_cost(const Instance& inst, const Allocation& alloc) {
  check_shape(inst, alloc);
  CostBreakdown cost;
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int k = 0; k < inst.num_resources(); ++k) {
      std::int64_t used = 0;
      for (int j = 0; j < inst.num_services(); ++j) used += alloc(i, j, k);
      cost.utilization += inst.unit_cost(i, k) * used;
    }
  }
  const auto active = activation_matrix(alloc);
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int j = 0; j < inst.num_services(); ++j) {
      if (active(i, j)) cost.activation += inst.activation_cost(i);
    }
  }
  cost.total = cost.utilization + cost.activation;
  return cost;
}

ValidationReport validate(const Instance& inst, const Allocation& alloc, std::int64_t rounds) {
  check_shape(inst, alloc);
  require(rounds >= 1, "rounds must be positive");
  ValidationReport report;
  report.rounds = rounds;
  const int I = inst.num_interfaces();
  const int J = inst.num_services();
  const int K = inst.num_resources();

  for (int j = 0; j < J && !report.demand; ++j) {
    for (int k = 0; k < K; ++k) {
      std::int64_t served = 0;
      for (int i = 0; i < I; ++i) served += alloc(i, j, k);
      if (served != inst.demand(j, k)) {
        report.demand = DemandViolation{j, k, served, inst.demand(j, k)};
        break;
      }
    }
  }

  for (int i = 0; i < I && !report.capacity; ++i) {
    for (int k = 0; k < K; ++k) {
      Rational consumed(0);
      for (int j = 0; j < J; ++j) consumed += inst.consumption_factor(i, j, k) * alloc(i, j, k);
      const std::int64_t limit = rounds * inst.capacity(i, k);
      if (consumed > limit) {
        report.capacity = CapacityViolation{i, k, consumed, limit};
        break;
      }
    }
  }

  for (int i = 0; i < I && !report.negative; ++i) {
    for (int j = 0; j < J && !report.negative; ++j) {
      for (int k = 0; k < K; ++k) {
        if (alloc(i, j, k) < 0) {
          report.negative = NegativeEntry{i, j, k, alloc(i, j, k)};
          break;
        }
      }
    }
  }
  return report;
}

std::optional<ResourceShortfall> find_shortfall(const Instance& inst, std::int64_t rounds) {
  require(rounds >= 1, "rounds must be positive");
  for (int k = 0; k < inst.num_resources(); ++k) {
    const auto demand = inst.total_demand(k);
    const auto capacity = inst.total_capacity(k);
    if (demand > rounds * capacity) {
      std::optional<std::int64_t> needed;
      if (capacity > 0) needed = (demand + capacity - 1) / capacity;
      return ResourceShortfall{k, demand, capacity, needed};
    }
  }
  return std::nullopt;
}

bool is_single_round_feasible(const Instance& inst) { return !find_shortfall(inst, 1); }

InfeasibleError make_infeasible_error(const ResourceShortfall& s) {
  const std::string label = "resource " + std::to_string(s.resource + 1);
  if (!s.rounds_needed) {
    return InfeasibleError("infeasible: " + label + " is not offered by any interface", s.resource);
  }
  return InfeasibleError("infeasible: " + label + " needs ≥ " + std::to_string(*s.rounds_needed) + " rounds",
                         s.resource, s.rounds_needed);
}

std::string describe(const ValidationReport& report) {
  std::ostringstream os;
  if (report.demand) {
    const auto& v = *report.demand;
    os << "demand violated: service " << v.service + 1 << ", resource " << v.resource + 1 << " served "
       << v.served << " of " << v.demanded;
  } else if (report.capacity) {
    const auto& v = *report.capacity;
    os << "capacity violated: interface " << v.interface + 1 << ", resource " << v.resource + 1 << " consumes "
       << to_string(v.consumed) << " > " << v.limit;
  } else if (report.negative) {
    const auto& v = *report.negative;
    os << "negative amount at interface " << v.interface + 1 << ", service " << v.service + 1 << ", resource "
       << v.resource + 1 << ": " << v.value;
  } else {
    os << "ok";
  }
  return os.str();
}

}  // namespace sia
