#include "ntnorch/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ntnorch {

const char* leaf_kind_name(LeafKind k) {
    switch (k) {
        case LeafKind::min_latency: return "min_latency";
        case LeafKind::max_latency: return "max_latency";
        case LeafKind::min_hops: return "min_hops";
        case LeafKind::max_hops: return "max_hops";
        case LeafKind::min_inter_op: return "min_inter_op";
        case LeafKind::max_inter_op: return "max_inter_op";
        case LeafKind::avoid_nodes: return "avoid";
    }
    return "?";
}

LeafKind leaf_kind_from_name(const std::string& name) {
    if (name == "min_latency") return LeafKind::min_latency;
    if (name == "max_latency") return LeafKind::max_latency;
    if (name == "min_hops") return LeafKind::min_hops;
    if (name == "max_hops") return LeafKind::max_hops;
    if (name == "min_inter_op") return LeafKind::min_inter_op;
    if (name == "max_inter_op") return LeafKind::max_inter_op;
    if (name == "avoid") return LeafKind::avoid_nodes;
    throw std::invalid_argument("unknown policy leaf kind: '" + name + "'");
}

bool PolicyLeaf::is_preference() const {
    switch (kind) {
        case LeafKind::min_latency:
        case LeafKind::min_hops:
        case LeafKind::min_inter_op:
            return true;
        case LeafKind::avoid_nodes:
            return !weights.empty();
        default:
            return false;
    }
}

bool PolicyLeaf::is_constraint() const {
    switch (kind) {
        case LeafKind::max_latency:
        case LeafKind::max_hops:
        case LeafKind::max_inter_op:
            return true;
        case LeafKind::avoid_nodes:
            return weights.empty();
        default:
            return false;
    }
}

bool Policy::has_preference_leaf() const {
    return std::any_of(leaves.begin(), leaves.end(),
                       [](const PolicyLeaf& l) { return l.is_preference(); });
}

bool Policy::has_constraint_leaf() const {
    return std::any_of(leaves.begin(), leaves.end(),
                       [](const PolicyLeaf& l) { return l.is_constraint(); });
}

const PolicyLeaf* Policy::find(LeafKind kind) const {
    for (const auto& l : leaves)
        if (l.kind == kind) return &l;
    return nullptr;
}

Policy Policy::min_latency() { return {{PolicyLeaf{LeafKind::min_latency}}}; }
Policy Policy::min_hops() { return {{PolicyLeaf{LeafKind::min_hops}}}; }
Policy Policy::min_inter_op() { return {{PolicyLeaf{LeafKind::min_inter_op}}}; }

Policy Policy::max_latency(double seconds) {
    PolicyLeaf l{LeafKind::max_latency};
    l.bound = seconds;
    return {{l}};
}

Policy Policy::max_hops(int n) {
    PolicyLeaf l{LeafKind::max_hops};
    l.bound = n;
    return {{l}};
}

Policy Policy::max_inter_op(int n) {
    PolicyLeaf l{LeafKind::max_inter_op};
    l.bound = n;
    return {{l}};
}

Policy Policy::avoid(std::vector<std::string> node_ids) {
    PolicyLeaf l{LeafKind::avoid_nodes};
    std::sort(node_ids.begin(), node_ids.end());
    node_ids.erase(std::unique(node_ids.begin(), node_ids.end()), node_ids.end());
    l.avoid = std::move(node_ids);
    return {{l}};
}

Policy Policy::and_with(const Policy& other) const {
    Policy out = *this;
    out.leaves.insert(out.leaves.end(), other.leaves.begin(), other.leaves.end());
    return out;
}

void validate(const Policy& p) {
    for (const auto& l : p.leaves) {
        switch (l.kind) {
            case LeafKind::max_latency:
                if (!(l.bound > 0.0)) throw std::invalid_argument("max_latency bound must be > 0");
                break;
            case LeafKind::max_hops:
                if (l.bound < 1.0 || l.bound != std::floor(l.bound))
                    throw std::invalid_argument("max_hops bound must be an integer >= 1");
                break;
            case LeafKind::max_inter_op:
                if (l.bound < 0.0 || l.bound != std::floor(l.bound))
                    throw std::invalid_argument("max_inter_op bound must be an integer >= 0");
                break;
            case LeafKind::avoid_nodes:
                if (l.avoid.empty() && l.weights.empty())
                    throw std::invalid_argument("avoid policy needs a nonempty node set");
                for (const auto& [id, w] : l.weights)
                    if (!(w > 0.0))
                        throw std::invalid_argument("avoid weight for '" + id + "' must be > 0");
                break;
            default:
                break;
        }
    }
}

bool RouteView::uses_node(const std::string& id) const {
    return std::binary_search(nodes.begin(), nodes.end(), id);
}

double evaluate(const PolicyLeaf& leaf, const RouteView& view) {
    switch (leaf.kind) {
        case LeafKind::min_latency:
            return view.latency_s;
        case LeafKind::min_hops:
            return view.hops;
        case LeafKind::min_inter_op:
            return view.inter_op;
        case LeafKind::avoid_nodes: {
            if (leaf.weights.empty())
                throw std::invalid_argument("evaluate: hard avoid leaf has no evaluation function");
            double total = 0.0;
            for (const auto& [id, w] : leaf.weights)
                if (view.uses_node(id)) total += w;
            return total;
        }
        default:
            throw std::invalid_argument(std::string("evaluate: '") + leaf_kind_name(leaf.kind)
                                        + "' is a constraint, not an evaluation function");
    }
}

namespace {

bool leaf_satisfied(const PolicyLeaf& leaf, const RouteView& view) {
    switch (leaf.kind) {
        case LeafKind::max_latency:
            return view.latency_s <= leaf.bound;
        case LeafKind::max_hops:
            return view.hops <= leaf.bound;
        case LeafKind::max_inter_op:
            return view.inter_op <= leaf.bound;
        case LeafKind::avoid_nodes:
            if (!leaf.weights.empty()) return true;  // weighted form is a preference
            return std::none_of(leaf.avoid.begin(), leaf.avoid.end(),
                                [&](const std::string& id) { return view.uses_node(id); });
        default:
            return true;  // preference leaves constrain nothing
    }
}

}  // namespace

bool satisfies(const Policy& p, const RouteView& view) {
    return std::all_of(p.leaves.begin(), p.leaves.end(),
                       [&](const PolicyLeaf& l) { return leaf_satisfied(l, view); });
}

std::vector<std::size_t> filter_candidates(const Policy& p, const std::vector<RouteView>& presented) {
    std::vector<std::size_t> base;
    for (std::size_t i = 0; i < presented.size(); ++i)
        if (satisfies(p, presented[i])) base.push_back(i);
    if (base.empty()) return base;

    // Each preference leaf's argmin is taken over the full constraint-stage
    // survivor set and the argmin sets are intersected, so leaf order does not
    // change the result.
    std::vector<char> keep(base.size(), 1);
    for (const auto& leaf : p.leaves) {
        if (!leaf.is_preference()) continue;
        std::vector<double> values(base.size());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < base.size(); ++k) {
            values[k] = evaluate(leaf, presented[base[k]]);
            best = std::min(best, values[k]);
        }
        for (std::size_t k = 0; k < base.size(); ++k)
            if (values[k] != best) keep[k] = 0;
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < base.size(); ++k)
        if (keep[k]) out.push_back(base[k]);
    return out;
}

Policy relax(const Policy& p, const RelaxAction& action) {
    Policy out = p;
    auto it = std::find_if(out.leaves.begin(), out.leaves.end(),
                           [&](const PolicyLeaf& l) { return l.kind == action.leaf; });
    if (it == out.leaves.end())
        throw std::invalid_argument(std::string("relax: policy has no '")
                                    + leaf_kind_name(action.leaf) + "' leaf");
    switch (action.kind) {
        case RelaxKind::increase_bound:
            if (it->kind != LeafKind::max_latency && it->kind != LeafKind::max_hops
                && it->kind != LeafKind::max_inter_op)
                throw std::invalid_argument("relax: increase_bound targets a bound-carrying leaf");
            it->bound += action.epsilon;
            break;
        case RelaxKind::drop_leaf:
            out.leaves.erase(it);
            break;
        case RelaxKind::shrink_avoid_set: {
            if (it->kind != LeafKind::avoid_nodes)
                throw std::invalid_argument("relax: shrink_avoid_set targets an avoid leaf");
            for (const auto& id : action.remove_nodes) {
                auto pos = std::lower_bound(it->avoid.begin(), it->avoid.end(), id);
                if (pos != it->avoid.end() && *pos == id) it->avoid.erase(pos);
                it->weights.erase(id);
            }
            if (it->avoid.empty() && it->weights.empty()) out.leaves.erase(it);
            break;
        }
    }
    return out;
}

namespace {

PolicyLeaf leaf_from_json(const std::string& key, const nlohmann::json& value) {
    PolicyLeaf leaf{LeafKind::min_latency};
    if (key == "min_latency" || key == "min_hops" || key == "min_inter_op") {
        leaf.kind = leaf_kind_from_name(key);
    } else if (key == "max_latency_ms") {
        leaf.kind = LeafKind::max_latency;
        leaf.bound = value.get<double>() / 1000.0;
    } else if (key == "max_hops" || key == "max_inter_op") {
        leaf.kind = leaf_kind_from_name(key);
        leaf.bound = value.get<double>();
    } else if (key == "avoid") {
        leaf.kind = LeafKind::avoid_nodes;
        std::vector<std::string> ids = value.get<std::vector<std::string>>();
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        leaf.avoid = std::move(ids);
    } else if (key == "avoid_weighted") {
        leaf.kind = LeafKind::avoid_nodes;
        leaf.weights = value.get<std::map<std::string, double>>();
    } else {
        throw std::invalid_argument("unknown policy key: '" + key + "'");
    }
    return leaf;
}

void parse_into(const nlohmann::json& j, Policy& out) {
    if (!j.is_object())
        throw std::invalid_argument("policy must be a JSON object");
    if (j.empty()) return;  // {} == Phi
    if (j.size() != 1)
        throw std::invalid_argument("policy object must hold exactly one key");
    const auto& key = j.begin().key();
    const auto& value = j.begin().value();
    if (key == "phi") return;
    if (key == "and") {
        if (!value.is_array()) throw std::invalid_argument("'and' expects an array of policies");
        for (const auto& child : value) parse_into(child, out);
        return;
    }
    out.leaves.push_back(leaf_from_json(key, value));
}

nlohmann::json leaf_to_json(const PolicyLeaf& leaf) {
    switch (leaf.kind) {
        case LeafKind::min_latency:
        case LeafKind::min_hops:
        case LeafKind::min_inter_op:
            return {{leaf_kind_name(leaf.kind), true}};
        case LeafKind::max_latency:
            return {{"max_latency_ms", leaf.bound * 1000.0}};
        case LeafKind::max_hops:
            return {{"max_hops", static_cast<int>(leaf.bound)}};
        case LeafKind::max_inter_op:
            return {{"max_inter_op", static_cast<int>(leaf.bound)}};
        case LeafKind::avoid_nodes:
            if (!leaf.weights.empty()) return {{"avoid_weighted", leaf.weights}};
            return {{"avoid", leaf.avoid}};
    }
    return nullptr;
}

}  // namespace

Policy policy_from_json(const nlohmann::json& j) {
    Policy p;
    parse_into(j, p);
    validate(p);
    return p;
}

nlohmann::json policy_to_json(const Policy& p) {
    if (p.is_phi()) return {{"phi", true}};
    if (p.leaves.size() == 1) return leaf_to_json(p.leaves[0]);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : p.leaves) arr.push_back(leaf_to_json(l));
    return {{"and", arr}};
}

std::string policy_to_string(const Policy& p) { return policy_to_json(p).dump(); }

void validate(const OrchestratorConfig& oc) {
    validate(oc.step1_policy);
    if (oc.step1_policy.has_preference_leaf())
        throw std::invalid_argument(
            "orchestrator step-1 policy must contain constraint leaves only");
    PolicyLeaf obj = oc.step3_objective;
    if (!obj.is_preference())
        throw std::invalid_argument("orchestrator step-3 objective must be a preference leaf");
}

}  // namespace ntnorch
