#include "sofai/strips.hpp"

#include "sofai/util.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace sofai {

std::string render_atom(const Atom &a) {
    if (a.args.empty())
        return a.pred;
    std::string s = a.pred;
    s.push_back('(');
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i)
            s.push_back(',');
        s += a.args[i];
    }
    s.push_back(')');
    return s;
}

std::string render_literal(const Literal &l) {
    return l.positive ? render_atom(l.atom) : "not(" + render_atom(l.atom) + ")";
}

PreconditionViolation::PreconditionViolation(std::string lit)
    : std::runtime_error("precondition violation: " + lit), literal(std::move(lit)) {}

std::vector<int> State::true_atoms() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        if (test(i))
            out.push_back(i);
    return out;
}

std::size_t StateHash::operator()(const State &s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : s.words()) {
        h ^= w;
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

int GroundedTask::find_action(const std::string &step) const {
    auto canon = canonical_step(step);
    if (!canon)
        return -1;
    auto it = action_ids.find(*canon);
    return it == action_ids.end() ? -1 : it->second;
}

std::string GroundedTask::render_goal_literal(const GoalLiteral &g) const {
    return g.positive ? atom_names[g.atom] : "not(" + atom_names[g.atom] + ")";
}

namespace {

using AtomKey = std::pair<std::string, std::vector<std::string>>;

AtomKey key_of(const Atom &a) { return {a.pred, a.args}; }

std::string make_step(const std::string &schema, const std::vector<std::string> &args) {
    std::string s = "(" + schema;
    for (auto &a : args) {
        s.push_back(' ');
        s += a;
    }
    s.push_back(')');
    return s;
}

struct Binder {
    const Domain &dom;
    const Instance &inst;

    // objects compatible with a type, sorted by name for deterministic output
    std::vector<std::string> objects_of(const std::string &type) const {
        std::vector<std::string> out;
        for (auto &o : inst.objects)
            if (dom.type_is(o.type, type))
                out.push_back(o.name);
        std::sort(out.begin(), out.end());
        return out;
    }
};

Atom substitute(const Atom &a, const std::vector<TypedName> &params,
                const std::vector<std::string> &binding) {
    Atom out;
    out.pred = a.pred;
    out.args.reserve(a.args.size());
    for (auto &arg : a.args) {
        auto it = std::find_if(params.begin(), params.end(),
                               [&](const TypedName &p) { return p.name == arg; });
        out.args.push_back(binding[static_cast<std::size_t>(it - params.begin())]);
    }
    return out;
}

} // namespace

GroundedTask ground(const Domain &dom, const Instance &inst) {
    Binder binder{dom, inst};

    struct RawAction {
        std::string schema;
        std::vector<std::string> args;
        std::vector<Atom> pre_pos, pre_neg, add, del;
    };
    std::vector<RawAction> raw;

    for (auto &schema : dom.action_schemas) {
        std::vector<std::vector<std::string>> candidates;
        candidates.reserve(schema.parameters.size());
        for (auto &p : schema.parameters)
            candidates.push_back(binder.objects_of(p.type));

        std::vector<std::string> binding(schema.parameters.size());
        // iterative product over candidate lists, lexicographic order
        std::vector<std::size_t> idx(schema.parameters.size(), 0);
        bool any_empty = std::any_of(candidates.begin(), candidates.end(),
                                     [](const auto &c) { return c.empty(); });
        if (any_empty && !schema.parameters.empty())
            continue;
        while (true) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                binding[i] = candidates[i][idx[i]];

            RawAction a;
            a.schema = schema.name;
            a.args = binding;
            for (auto &lit : schema.preconditions) {
                Atom g = substitute(lit.atom, schema.parameters, binding);
                (lit.positive ? a.pre_pos : a.pre_neg).push_back(std::move(g));
            }
            for (auto &e : schema.add_effects)
                a.add.push_back(substitute(e, schema.parameters, binding));
            for (auto &e : schema.del_effects)
                a.del.push_back(substitute(e, schema.parameters, binding));

            // statically inconsistent: same atom required both true and false
            bool inconsistent = false;
            for (auto &p : a.pre_pos)
                for (auto &n : a.pre_neg)
                    if (p == n)
                        inconsistent = true;
            if (!inconsistent)
                raw.push_back(std::move(a));

            // advance binding
            std::size_t k = idx.size();
            while (k > 0) {
                --k;
                if (++idx[k] < candidates[k].size())
                    break;
                idx[k] = 0;
                if (k == 0) {
                    k = idx.size() + 1; // done marker
                    break;
                }
            }
            if (idx.empty() || k == idx.size() + 1)
                break;
        }
    }

    // Atom table: everything in init, goals, or any ground action, ordered
    // lexicographically by predicate name then argument names.
    std::map<AtomKey, int> table;
    auto collect = [&table](const Atom &a) { table.emplace(key_of(a), 0); };
    for (auto &a : inst.init)
        collect(a);
    for (auto &g : inst.goal)
        collect(g.atom);
    for (auto &a : raw) {
        for (auto &x : a.pre_pos)
            collect(x);
        for (auto &x : a.pre_neg)
            collect(x);
        for (auto &x : a.add)
            collect(x);
        for (auto &x : a.del)
            collect(x);
    }

    GroundedTask task;
    task.domain_name = dom.name;
    task.instance_name = inst.name;
    int next = 0;
    for (auto &[key, id] : table) {
        id = next++;
        task.atom_names.push_back(render_atom(Atom{key.first, key.second}));
    }
    for (std::size_t i = 0; i < task.atom_names.size(); ++i)
        task.atom_ids.emplace(task.atom_names[i], static_cast<int>(i));

    auto index_of = [&table](const Atom &a) { return table.at(key_of(a)); };
    auto indices = [&](const std::vector<Atom> &atoms) {
        std::vector<int> out;
        out.reserve(atoms.size());
        for (auto &a : atoms)
            out.push_back(index_of(a));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    task.actions.reserve(raw.size());
    for (auto &a : raw) {
        GroundAction ga;
        ga.schema = a.schema;
        ga.args = a.args;
        ga.step = make_step(a.schema, a.args);
        ga.pre_pos = indices(a.pre_pos);
        ga.pre_neg = indices(a.pre_neg);
        ga.add = indices(a.add);
        ga.del = indices(a.del);
        task.action_ids.emplace(ga.step, static_cast<int>(task.actions.size()));
        task.actions.push_back(std::move(ga));
    }

    task.init = State(static_cast<int>(task.atom_names.size()));
    for (auto &a : inst.init)
        task.init.set(index_of(a));
    for (auto &g : inst.goal)
        task.goals.push_back({index_of(g.atom), g.positive});

    return task;
}

std::optional<std::string> first_unsatisfied(const GroundedTask &task, const State &s, int action) {
    const GroundAction &a = task.actions[static_cast<std::size_t>(action)];
    for (int p : a.pre_pos)
        if (!s.test(p))
            return task.atom_names[static_cast<std::size_t>(p)];
    for (int n : a.pre_neg)
        if (s.test(n))
            return "not(" + task.atom_names[static_cast<std::size_t>(n)] + ")";
    return std::nullopt;
}

State apply(const GroundedTask &task, const State &s, int action) {
    if (auto violated = first_unsatisfied(task, s, action))
        throw PreconditionViolation(*violated);
    const GroundAction &a = task.actions[static_cast<std::size_t>(action)];
    State out = s;
    for (int d : a.del)
        out.reset(d);
    for (int ad : a.add)
        out.set(ad);
    return out;
}

int holds(const State &s, const std::vector<GoalLiteral> &goals) {
    int count = 0;
    for (auto &g : goals)
        if (s.test(g.atom) == g.positive)
            ++count;
    return count;
}

int compute_difficulty(const Instance &inst) {
    return 10 * static_cast<int>(inst.objects.size()) + static_cast<int>(inst.goal.size());
}

std::optional<std::string> canonical_step(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1])))
        --e;
    if (e - b < 2 || text[b] != '(' || text[e - 1] != ')')
        return std::nullopt;
    std::istringstream in(std::string(text.substr(b + 1, e - b - 2)));
    std::string word, out;
    bool first = true;
    while (in >> word) {
        if (word.find('(') != std::string::npos || word.find(')') != std::string::npos)
            return std::nullopt;
        for (auto &c : word)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out += first ? "(" : " ";
        out += word;
        first = false;
    }
    if (first)
        return std::nullopt;
    out.push_back(')');
    return out;
}

Plan parse_plan_text(std::string_view text) {
    Plan plan;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        ++lineno;
        std::size_t b = 0;
        while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b])))
            ++b;
        if (b < line.size() && line[b] != ';') {
            auto step = canonical_step(line);
            if (!step)
                throw std::runtime_error("unparsable plan step at line " + std::to_string(lineno) +
                                         ": '" + std::string(line) + "'");
            plan.steps.push_back(*step);
        }
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }
    return plan;
}

std::string render_plan(const Plan &plan) {
    std::string out;
    for (auto &s : plan.steps) {
        out += s;
        out.push_back('\n');
    }
    return out;
}

} // namespace sofai
