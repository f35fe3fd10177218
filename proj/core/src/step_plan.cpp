#include "cfree/stepper.hpp"

#include <numeric>
#include <optional>

#include "cfree/errors.hpp"

namespace cfree {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

PlannedRow compile_row(const RowRef& ref, const Row& row) {
  PlannedRow out;
  out.ref = ref;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] != 0.0) out.terms.emplace_back(static_cast<int>(k), row[k]);
  }
  return out;
}

}  // namespace

StepPlan plan_step(const CFTableau& t) {
  validate_structure(t);
  StepPlan plan;
  plan.name = t.name;
  plan.stages = t.stages;
  plan.fsal = t.fsal;
  plan.order = t.order;
  plan.embedded_order = t.embedded_order;

  const std::vector<RowRef> refs = all_rows(t);
  auto index_of = [&](const RowRef& ref) {
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (refs[i] == ref) return i;
    }
    throw StructuralError("reuse pair names a missing row " + to_string(ref));
  };
  DisjointSets sets(refs.size());
  std::vector<bool> in_pair(refs.size(), false);
  for (const auto& [lhs, rhs] : t.reuse) {
    const std::size_t a = index_of(lhs), b = index_of(rhs);
    sets.unite(a, b);
    in_pair[a] = in_pair[b] = true;
  }
  std::vector<int> group_id(refs.size(), -1);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (!in_pair[i]) continue;
    const std::size_t root = sets.find(i);
    if (group_id[root] < 0) group_id[root] = plan.cache_groups++;
    group_id[i] = group_id[root];
  }

  plan.stage_rows.resize(static_cast<std::size_t>(t.stages));
  for (std::size_t i = 0; i < refs.size(); ++i) {
    PlannedRow row = compile_row(refs[i], t.row(refs[i]));
    if (!row.is_identity()) row.cache_group = group_id[i];
    switch (refs[i].part) {
      case Part::Stage: plan.stage_rows[static_cast<std::size_t>(refs[i].stage - 1)].push_back(row); break;
      case Part::Update: plan.update.push_back(row); break;
      case Part::Embedded: plan.embedded.push_back(row); break;
    }
  }
  return plan;
}

int plan_cache_group(const StepPlan& plan, const RowRef& ref) {
  auto search = [&](const std::vector<PlannedRow>& rows) -> std::optional<int> {
    for (const PlannedRow& row : rows) {
      if (row.ref == ref) return row.cache_group;
    }
    return std::nullopt;
  };
  for (const auto& rows : plan.stage_rows) {
    if (auto g = search(rows)) return *g;
  }
  if (auto g = search(plan.update)) return *g;
  if (auto g = search(plan.embedded)) return *g;
  throw StructuralError("plan " + plan.name + " has no row " + to_string(ref));
}

Budget count_budget(const StepPlan& plan, const StepOptions& options, bool carried_f) {
  Budget b;
  std::vector<bool> seen(static_cast<std::size_t>(plan.cache_groups), false);
  auto visit = [&](const std::vector<PlannedRow>& rows) {
    for (const PlannedRow& row : rows) {
      if (row.is_identity()) continue;
      if (options.use_cache && row.cache_group >= 0) {
        const auto group = static_cast<std::size_t>(row.cache_group);
        if (seen[group]) continue;
        seen[group] = true;
      }
      ++b.exp_per_step;
    }
  };
  for (const auto& rows : plan.stage_rows) visit(rows);
  visit(plan.update);
  if (options.embedded) visit(plan.embedded);

  b.feval_per_step = plan.stages - 1;
  if (!(carried_f && plan.fsal)) ++b.feval_per_step;
  if (plan.fsal) ++b.feval_per_step;
  return b;
}

Budget count_budget(const CFTableau& tableau, const StepOptions& options) {
  return count_budget(plan_step(tableau), options, true);
}

}  // namespace cfree
