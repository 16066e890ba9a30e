#include "z1/mechlogic.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace z1 {

Direction rotate90(Direction d) {
    switch (d) {
    case Direction::North: return Direction::East;
    case Direction::East: return Direction::South;
    case Direction::South: return Direction::West;
    case Direction::West: return Direction::North;
    }
    return Direction::North;
}

const char* direction_name(Direction d) {
    switch (d) {
    case Direction::North: return "N";
    case Direction::East: return "E";
    case Direction::South: return "S";
    case Direction::West: return "W";
    }
    return "?";
}

const char* engagement_name(Engagement e) {
    switch (e) {
    case Engagement::I: return "I";
    case Engagement::II: return "II";
    case Engagement::III: return "III";
    case Engagement::IV: return "IV";
    }
    return "?";
}

int engagement_cycle_index(Engagement e) {
    switch (e) {
    case Engagement::IV: return 0;  // operand load
    case Engagement::I: return 1;
    case Engagement::II: return 2;
    case Engagement::III: return 3;
    }
    return -1;
}

// Clock motion direction per engagement; chained relays rotate from here.
static Direction clock_direction(Engagement e) {
    switch (e) {
    case Engagement::I: return Direction::North;
    case Engagement::II: return Direction::East;
    case Engagement::III: return Direction::South;
    case Engagement::IV: return Direction::West;
    }
    return Direction::North;
}

unsigned eval_relay(Polarity polarity, unsigned control, bool actor_active) {
    if (!actor_active) {
        return 0;
    }
    return (polarity == Polarity::Negating) ? (control ^ 1u) : (control & 1u);
}

NodeId MechCircuit::add_input(const std::string& name) {
    NodeId id = static_cast<NodeId>(node_names_.size());
    node_names_.push_back(name);
    NodeInfo info;
    info.is_input = true;
    node_info_.push_back(info);
    input_ids_.push_back(id);
    return id;
}

NodeId MechCircuit::add_node(const std::string& name) {
    NodeId id = static_cast<NodeId>(node_names_.size());
    node_names_.push_back(name);
    node_info_.push_back(NodeInfo{});
    return id;
}

void MechCircuit::note_driver(NodeId node, Engagement eng) {
    NodeInfo& info = node_info_[node];
    if (info.is_input) {
        throw ConstructionError("relay drives input node " + node_names_[node]);
    }
    if (info.driven && info.produced_in != eng) {
        throw ConstructionError("node " + node_names_[node] +
                                " driven from two different engagements");
    }
    info.driven = true;
    info.produced_in = eng;
}

void MechCircuit::add_relay(const std::string& id, Engagement eng, Polarity pol,
                            NodeId control, NodeId actor, NodeId actuated) {
    MechRelay r;
    r.id = id;
    r.control = control;
    r.actor = actor;
    r.actuated = actuated;
    r.polarity = pol;
    r.engagement = eng;
    note_driver(actuated, eng);
    relays_.push_back(r);
}

void MechCircuit::add_dual_relay(const std::string& id, Engagement eng,
                                 NodeId control, NodeId actor,
                                 NodeId actuated, NodeId actuated_b) {
    MechRelay r;
    r.id = id;
    r.control = control;
    r.actor = actor;
    r.actuated = actuated;
    r.actuated_b = actuated_b;
    r.engagement = eng;
    note_driver(actuated, eng);
    note_driver(actuated_b, eng);
    relays_.push_back(r);
}

void MechCircuit::add_carry_chain(const std::string& id, Engagement eng,
                                  NodeId carry_in, std::vector<NodeId> gen,
                                  std::vector<NodeId> prop,
                                  std::vector<NodeId> carry) {
    if (gen.size() != prop.size() || carry.size() != gen.size() + 1) {
        throw ConstructionError("carry chain " + id + ": mismatched widths");
    }
    for (NodeId n : carry) {
        note_driver(n, eng);
    }
    chains_.push_back(CarryChain{id, eng, carry_in, std::move(gen),
                                 std::move(prop), std::move(carry)});
}

void MechCircuit::finalize() {
    // Control plates must be set before the consuming engagement starts.
    for (const MechRelay& r : relays_) {
        const NodeInfo& c = node_info_[r.control];
        if (!c.is_input) {
            if (!c.driven) {
                throw ConstructionError("relay " + r.id + ": undriven control " +
                                        node_names_[r.control]);
            }
            if (engagement_cycle_index(c.produced_in) >=
                engagement_cycle_index(r.engagement)) {
                throw ConstructionError("relay " + r.id + ": control " +
                                        node_names_[r.control] +
                                        " not latched before engagement " +
                                        engagement_name(r.engagement));
            }
        }
        if (r.actor != kNoNode) {
            const NodeInfo& a = node_info_[r.actor];
            if (a.is_input || !a.driven ||
                a.produced_in != r.engagement) {
                throw ConstructionError("relay " + r.id +
                                        ": chained actor must come from the same engagement");
            }
        }
    }
    for (const CarryChain& ch : chains_) {
        for (std::size_t i = 0; i < ch.gen.size(); ++i) {
            for (NodeId n : {ch.gen[i], ch.prop[i]}) {
                const NodeInfo& info = node_info_[n];
                if (!info.is_input &&
                    (!info.driven || engagement_cycle_index(info.produced_in) >
                                         engagement_cycle_index(ch.engagement))) {
                    throw ConstructionError("carry chain " + ch.id +
                                            ": input not ready in engagement " +
                                            engagement_name(ch.engagement));
                }
            }
        }
    }

    // Per engagement, order relays so every chained motion source is
    // evaluated before its consumers.
    eval_order_.clear();
    for (Engagement eng : {Engagement::IV, Engagement::I, Engagement::II, Engagement::III}) {
        std::vector<int> members;
        for (int i = 0; i < static_cast<int>(relays_.size()); ++i) {
            if (relays_[i].engagement == eng) {
                members.push_back(i);
            }
        }
        // node -> producing relays (within this engagement)
        std::vector<std::vector<int>> producers(node_names_.size());
        for (int i : members) {
            producers[relays_[i].actuated].push_back(i);
            if (relays_[i].actuated_b != kNoNode) {
                producers[relays_[i].actuated_b].push_back(i);
            }
        }
        std::vector<int> indeg(relays_.size(), 0);
        std::vector<std::vector<int>> edges(relays_.size());
        for (int i : members) {
            if (relays_[i].actor != kNoNode) {
                for (int p : producers[relays_[i].actor]) {
                    edges[p].push_back(i);
                    ++indeg[i];
                }
            }
        }
        std::queue<int> ready;
        for (int i : members) {
            if (indeg[i] == 0) {
                ready.push(i);
            }
        }
        int emitted = 0;
        while (!ready.empty()) {
            int i = ready.front();
            ready.pop();
            eval_order_.push_back(i);
            ++emitted;
            for (int j : edges[i]) {
                if (--indeg[j] == 0) {
                    ready.push(j);
                }
            }
        }
        if (emitted != static_cast<int>(members.size())) {
            throw ConstructionError("motion cycle in engagement " +
                                    std::string(engagement_name(eng)));
        }
    }

    // Directions: rotate from the clock, or from the chained motion source.
    // Every driver of a plate must push it the same way.
    std::vector<Direction> node_dir(node_names_.size(), Direction::North);
    std::vector<bool> dir_set(node_names_.size(), false);
    auto set_dir = [&](NodeId n, Direction d, const std::string& who) {
        if (dir_set[n] && node_dir[n] != d) {
            throw ConstructionError(who + ": drivers of " + node_names_[n] +
                                    " push in different directions");
        }
        node_dir[n] = d;
        dir_set[n] = true;
    };
    for (int idx : eval_order_) {
        MechRelay& r = relays_[idx];
        Direction actor_dir = (r.actor == kNoNode)
                                  ? clock_direction(r.engagement)
                                  : node_dir[r.actor];
        r.direction = rotate90(actor_dir);
        set_dir(r.actuated, r.direction, r.id);
        if (r.actuated_b != kNoNode) {
            set_dir(r.actuated_b, r.direction, r.id);
        }
    }
    for (const CarryChain& ch : chains_) {
        Direction d = rotate90(clock_direction(ch.engagement));
        for (NodeId n : ch.carry) {
            set_dir(n, d, ch.id);
        }
    }
    for (std::size_t n = 0; n < node_info_.size(); ++n) {
        node_info_[n].direction = node_dir[n];
    }
    finalized_ = true;
}

std::vector<unsigned> MechCircuit::evaluate(const std::vector<unsigned>& inputs) const {
    if (!finalized_) {
        throw UsageError("MechCircuit::evaluate before finalize");
    }
    if (inputs.size() != input_ids_.size()) {
        throw UsageError("MechCircuit::evaluate: expected " +
                         std::to_string(input_ids_.size()) + " inputs");
    }
    std::vector<unsigned> value(node_names_.size(), 0);
    for (std::size_t i = 0; i < input_ids_.size(); ++i) {
        value[input_ids_[i]] = inputs[i] & 1u;
    }
    std::size_t idx = 0;
    for (Engagement eng : {Engagement::IV, Engagement::I, Engagement::II, Engagement::III}) {
        while (idx < eval_order_.size() &&
               relays_[eval_order_[idx]].engagement == eng) {
            const MechRelay& r = relays_[eval_order_[idx]];
            ++idx;
            bool motion = (r.actor == kNoNode) ? true : value[r.actor] != 0;
            if (r.actuated_b != kNoNode) {
                value[r.actuated] |= eval_relay(Polarity::Normal, value[r.control], motion);
                value[r.actuated_b] |=
                    eval_relay(Polarity::Negating, value[r.control], motion);
            } else {
                value[r.actuated] |= eval_relay(r.polarity, value[r.control], motion);
            }
        }
        for (const CarryChain& ch : chains_) {
            if (ch.engagement != eng) {
                continue;
            }
            unsigned c = value[ch.carry_in];
            value[ch.carry[0]] = c;
            for (std::size_t i = 0; i < ch.gen.size(); ++i) {
                c = value[ch.gen[i]] | (value[ch.prop[i]] & c);
                value[ch.carry[i + 1]] = c;
            }
        }
    }
    return value;
}

std::string MechCircuit::netlist() const {
    std::ostringstream os;
    for (const MechRelay& r : relays_) {
        os << r.id << '\t'
           << (r.actuated_b != kNoNode
                   ? "dual"
                   : (r.polarity == Polarity::Negating ? "negating" : "normal"))
           << '\t' << engagement_name(r.engagement)
           << '\t' << direction_name(r.direction)
           << "\tctl=" << node_names_[r.control]
           << " act=" << (r.actor == kNoNode ? std::string("clock") : node_names_[r.actor])
           << "\tout=" << node_names_[r.actuated];
        if (r.actuated_b != kNoNode) {
            os << ",~" << node_names_[r.actuated_b];
        }
        os << '\n';
    }
    for (const CarryChain& ch : chains_) {
        os << ch.id << "\tchain\t" << engagement_name(ch.engagement) << '\t'
           << direction_name(rotate90(clock_direction(ch.engagement)))
           << "\tcin=" << node_names_[ch.carry_in] << " width=" << ch.gen.size()
           << "\tout=" << node_names_[ch.carry.front()] << ".."
           << node_names_[ch.carry.back()] << '\n';
    }
    return os.str();
}

unsigned MechGate::eval(const std::vector<unsigned>& in) const {
    return circuit.evaluate(in)[output];
}

MechGate build_gate(GateKind kind) {
    MechGate g;
    MechCircuit& c = g.circuit;
    NodeId a = c.add_input("a");
    g.inputs.push_back(a);
    if (kind == GateKind::NOT) {
        NodeId out = c.add_node("out");
        c.add_relay("not", Engagement::I, Polarity::Negating, a, kNoNode, out);
        g.output = out;
        c.finalize();
        return g;
    }
    NodeId b = c.add_input("b");
    g.inputs.push_back(b);
    NodeId out = c.add_node("out");
    switch (kind) {
    case GateKind::AND: {
        // series: motion gated by a, then by b
        NodeId m = c.add_node("m");
        c.add_relay("and.1", Engagement::I, Polarity::Normal, a, kNoNode, m);
        c.add_relay("and.2", Engagement::I, Polarity::Normal, b, m, out);
        break;
    }
    case GateKind::OR: {
        // two relays pushing the same plate
        c.add_relay("or.1", Engagement::I, Polarity::Normal, a, kNoNode, out);
        c.add_relay("or.2", Engagement::I, Polarity::Normal, b, kNoNode, out);
        break;
    }
    case GateKind::XOR: {
        // dual relay splits the motion by a; b picks the disagreeing path
        NodeId ma = c.add_node("ma");
        NodeId mna = c.add_node("mna");
        c.add_dual_relay("xor.1", Engagement::I, a, kNoNode, ma, mna);
        c.add_relay("xor.2", Engagement::I, Polarity::Negating, b, ma, out);
        c.add_relay("xor.3", Engagement::I, Polarity::Normal, b, mna, out);
        break;
    }
    case GateKind::NOT:
        break;
    }
    g.output = out;
    c.finalize();
    return g;
}

MechAdder::MechAdder(int width) : width_(width) {
    if (width < 1 || width > 24) {
        throw UsageError("MechAdder: width out of range");
    }
    MechCircuit& c = circuit_;
    std::vector<NodeId> a_l(width), b_l(width);
    carry_n_.resize(width + 1);

    for (int i = 0; i < width; ++i) {
        a_in_.push_back(c.add_input("a" + std::to_string(i)));
        b_in_.push_back(c.add_input("b" + std::to_string(i)));
    }
    carry_in_ = c.add_input("cin");

    // engagement IV: operand latches
    for (int i = 0; i < width; ++i) {
        a_l[i] = c.add_node("al" + std::to_string(i));
        b_l[i] = c.add_node("bl" + std::to_string(i));
        c.add_relay("c" + std::to_string(i) + ".la", Engagement::IV,
                    Polarity::Normal, a_in_[i], kNoNode, a_l[i]);
        c.add_relay("c" + std::to_string(i) + ".lb", Engagement::IV,
                    Polarity::Normal, b_in_[i], kNoNode, b_l[i]);
    }

    // engagement I: gates 1-4, XOR and AND per cell
    for (int i = 0; i < width; ++i) {
        std::string p = "c" + std::to_string(i) + ".";
        NodeId pa = c.add_node(p + "pa");
        NodeId pna = c.add_node(p + "pna");
        NodeId x = c.add_node("xor" + std::to_string(i));
        NodeId n = c.add_node("and" + std::to_string(i));
        c.add_dual_relay(p + "g1", Engagement::I, a_l[i], kNoNode, pa, pna);
        c.add_relay(p + "g2", Engagement::I, Polarity::Negating, b_l[i], pa, x);
        c.add_relay(p + "g3", Engagement::I, Polarity::Normal, b_l[i], pna, x);
        c.add_relay(p + "g4", Engagement::I, Polarity::Normal, b_l[i], pa, n);
        xor_n_.push_back(x);
        and_n_.push_back(n);
    }

    // engagement II: carry generation (gate 5) and the chain switches
    // (gate 6) feed the anticipating carriage; gate 7 hands the XOR result
    // to the final level
    for (int i = 0; i <= width; ++i) {
        carry_n_[i] = c.add_node("carry" + std::to_string(i));
    }
    NodeId cin_m = c.add_node("cin.m");
    c.add_relay("cin.inject", Engagement::II, Polarity::Normal,
                carry_in_, kNoNode, cin_m);
    std::vector<NodeId> gen(width), xup(width);
    for (int i = 0; i < width; ++i) {
        std::string p = "c" + std::to_string(i) + ".";
        gen[i] = c.add_node("gen" + std::to_string(i));
        NodeId prop = c.add_node("prop" + std::to_string(i));
        xup[i] = c.add_node("xup" + std::to_string(i));
        c.add_relay(p + "g5", Engagement::II, Polarity::Normal,
                    and_n_[i], kNoNode, gen[i]);
        c.add_relay(p + "g6", Engagement::II, Polarity::Normal,
                    xor_n_[i], kNoNode, prop);
        c.add_relay(p + "g7", Engagement::II, Polarity::Normal,
                    xor_n_[i], kNoNode, xup[i]);
        prop_n_.push_back(prop);
    }
    c.add_carry_chain("carriage", Engagement::II, cin_m, gen, prop_n_, carry_n_);

    // engagement III: gates 8 and 9 compute the final XOR per cell
    for (int i = 0; i < width; ++i) {
        std::string p = "c" + std::to_string(i) + ".";
        NodeId px = c.add_node(p + "px");
        NodeId pnx = c.add_node(p + "pnx");
        NodeId s = c.add_node("sum" + std::to_string(i));
        c.add_dual_relay(p + "g8", Engagement::III, xup[i], kNoNode, px, pnx);
        c.add_relay(p + "g9a", Engagement::III, Polarity::Negating,
                    carry_n_[i], px, s);
        c.add_relay(p + "g9b", Engagement::III, Polarity::Normal,
                    carry_n_[i], pnx, s);
        sum_n_.push_back(s);
    }
    c.finalize();
}

MechAdderResult MechAdder::eval(std::uint32_t a, std::uint32_t b, bool carry_in) const {
    std::vector<unsigned> in;
    in.reserve(2 * width_ + 1);
    for (int i = 0; i < width_; ++i) {
        in.push_back((a >> i) & 1u);
        in.push_back((b >> i) & 1u);
    }
    in.push_back(carry_in ? 1u : 0u);
    std::vector<unsigned> v = circuit_.evaluate(in);

    MechAdderResult r;
    std::uint32_t x = 0, n = 0, p = 0, cy = 0, s = 0;
    for (int i = 0; i < width_; ++i) {
        x |= v[xor_n_[i]] << i;
        n |= v[and_n_[i]] << i;
        p |= v[prop_n_[i]] << i;
        cy |= v[carry_n_[i]] << i;
        s |= v[sum_n_[i]] << i;
    }
    r.xor_bits = BitVector(width_, x);
    r.and_bits = BitVector(width_, n);
    r.prop_bits = BitVector(width_, p);
    r.carry_bits = BitVector(width_, cy);
    r.sum = BitVector(width_, s);
    r.carry_out = v[carry_n_[width_]] != 0;
    return r;
}

} // namespace z1
