#ifndef Z1_MECHLOGIC_HPP
#define Z1_MECHLOGIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "z1/alu.hpp"
#include "z1/errors.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// Mechanical relay logic.
//
// A bit is the position of a plate; a gate passes clocked motion through a
// plate whose position encodes the control bit. Motion travels in one of
// four orthogonal directions and every actuated plate moves at right angles
// to its actor, so four chained gates return to the starting direction.
// One machine cycle is four engagements; the adder loads its operands in
// engagement IV, forms partial sums and carries in I and II, and produces
// the final result in III.
//
// The model is discrete: no geometry, no forces, just which plate moves in
// which engagement. A motion may pass through several relays in series
// within one engagement (that is how multi-input gates and the carry
// "bandwagon" work); a relay's CONTROL plate, however, must have been set
// in an earlier engagement or be a circuit input.
// ---------------------------------------------------------------------------

enum class Direction : std::uint8_t { North, East, South, West };
Direction rotate90(Direction d);
const char* direction_name(Direction d);

enum class Engagement : std::uint8_t { I, II, III, IV };
const char* engagement_name(Engagement e);
// Position of an engagement within a machine cycle: IV (load) first.
int engagement_cycle_index(Engagement e);

enum class Polarity : std::uint8_t { Normal, Negating };

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

// Stateless single-relay behavior: the actuated plate moves iff the actor
// moves and the (possibly negated) control bit allows it.
unsigned eval_relay(Polarity polarity, unsigned control, bool actor_active);

struct MechRelay {
    std::string id;
    NodeId control = kNoNode;
    NodeId actor = kNoNode;    // kNoNode means the engagement clock itself
    NodeId actuated = kNoNode;
    NodeId actuated_b = kNoNode;  // second plate of a dual relay, gets NOT control
    Polarity polarity = Polarity::Normal;
    Engagement engagement = Engagement::I;
    Direction direction = Direction::North;  // derived at finalize()
};

class MechCircuit {
public:
    NodeId add_input(const std::string& name);
    NodeId add_node(const std::string& name);

    // Single relay. actor == kNoNode uses the engagement clock.
    void add_relay(const std::string& id, Engagement eng, Polarity pol,
                   NodeId control, NodeId actor, NodeId actuated);
    // Relay with two actuated plates: `actuated` follows the control bit,
    // `actuated_b` its negation.
    void add_dual_relay(const std::string& id, Engagement eng,
                        NodeId control, NodeId actor,
                        NodeId actuated, NodeId actuated_b);

    // The anticipating-carriage contraption: a generated carry rides left
    // through every closed chain switch in a single engagement. How the
    // machine packs this unbounded OR-AND cascade into one engagement is
    // not modeled mechanically; the element evaluates it combinationally
    // after the engagement's relays have moved.
    //   carry[0] = carry_in, carry[i+1] = gen[i] OR (prop[i] AND carry[i])
    void add_carry_chain(const std::string& id, Engagement eng,
                         NodeId carry_in, std::vector<NodeId> gen,
                         std::vector<NodeId> prop, std::vector<NodeId> carry);

    // Validates the schedule and computes directions and evaluation order.
    // Throws ConstructionError on: a control consumed in the engagement that
    // produces it, a chained actor from a different engagement, or a motion
    // cycle.
    void finalize();

    // Runs one full machine cycle (engagements IV, I, II, III) and returns
    // the value of every node. `inputs` must cover all input nodes.
    std::vector<unsigned> evaluate(const std::vector<unsigned>& inputs) const;

    int node_count() const { return static_cast<int>(node_names_.size()); }
    int input_count() const { return static_cast<int>(input_ids_.size()); }
    int relay_count() const { return static_cast<int>(relays_.size()); }
    const std::vector<MechRelay>& relays() const { return relays_; }
    const std::string& node_name(NodeId n) const { return node_names_[n]; }

    // Plain-text netlist, one relay per line: id, kind, engagement,
    // inputs, outputs.
    std::string netlist() const;

private:
    struct NodeInfo {
        bool is_input = false;
        bool driven = false;
        Engagement produced_in = Engagement::I;
        Direction direction = Direction::North;
    };

    struct CarryChain {
        std::string id;
        Engagement engagement;
        NodeId carry_in;
        std::vector<NodeId> gen, prop, carry;
    };

    std::vector<std::string> node_names_;
    std::vector<NodeInfo> node_info_;
    std::vector<NodeId> input_ids_;
    std::vector<MechRelay> relays_;
    std::vector<CarryChain> chains_;
    std::vector<int> eval_order_;  // relay indices, cycle order then topo
    bool finalized_ = false;

    void note_driver(NodeId node, Engagement eng);
};

enum class GateKind { AND, OR, NOT, XOR };

// A gate circuit with inputs named "a" (and "b" except for NOT) and a
// single output node; truth-table equal to the named Boolean function.
struct MechGate {
    MechCircuit circuit;
    std::vector<NodeId> inputs;
    NodeId output;

    unsigned eval(const std::vector<unsigned>& in) const;
};

MechGate build_gate(GateKind kind);

// ---------------------------------------------------------------------------
// The adder cell chain: per bit position the nine-gate cell (XOR/AND in
// engagement I, carry generation and bandwagon in II, final XOR in III),
// with operand latches in engagement IV. The carry chain is a series motion
// path inside engagement II: a generated carry keeps riding left while the
// XOR bits hold the chain closed.
// ---------------------------------------------------------------------------
struct MechAdderResult {
    BitVector xor_bits;
    BitVector and_bits;
    BitVector prop_bits;    // state of the chain switches (gate 6)
    BitVector carry_bits;   // carry into each position
    BitVector sum;
    bool carry_out = false;
};

class MechAdder {
public:
    explicit MechAdder(int width);

    int width() const { return width_; }
    const MechCircuit& circuit() const { return circuit_; }

    MechAdderResult eval(std::uint32_t a, std::uint32_t b, bool carry_in = false) const;

private:
    int width_;
    MechCircuit circuit_;
    std::vector<NodeId> a_in_, b_in_;
    NodeId carry_in_ = kNoNode;
    std::vector<NodeId> xor_n_, and_n_, prop_n_, carry_n_, sum_n_;
};

} // namespace z1

#endif
