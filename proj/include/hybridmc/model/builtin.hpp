/// @file builtin.hpp
/// @brief Scalable benchmark nets: philo, ring, fms, kanban.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hybridmc/model/petri.hpp"

namespace hmc {

/// Builds a named net at the given scale. Throws UsageError for an unknown
/// name or a scale below the model's minimum.
PetriNet builtin_net(std::string_view name, unsigned scale);

std::vector<std::string> builtin_names();

/// Dining philosophers: each philosopher independently takes the left and
/// the right fork, eats, then releases both.
PetriNet philo_net(unsigned n);
/// Slotted ring network protocol with n nodes. Every link initially carries
/// a free slot. A node waiting for a slot takes it from its incoming link;
/// it may write a message into a free slot or pass it on unchanged, and on a
/// used slot it either removes its own message (Owner, then gives the slot
/// back free) or forwards another node's (Other). A slot is put on the
/// outgoing link once that link is empty.
PetriNet ring_net(unsigned n);
/// Flexible manufacturing system with n pallets per part type: machines M1
/// (three units), M2 (one unit) and M3 (two units); type-1 and type-2 parts
/// are either shipped after machining or assembled together on M3.
PetriNet fms_net(unsigned n);
/// Kanban production system with n cards per cell.
PetriNet kanban_net(unsigned n);

} // namespace hmc
