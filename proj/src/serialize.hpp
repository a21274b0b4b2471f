#ifndef OBPROJ_SERIALIZE_HPP
#define OBPROJ_SERIALIZE_HPP

#include <string>
#include <vector>

#include "projector.hpp"
#include "space.hpp"

namespace obproj {

/// State <-> self-describing JSON. Vector entries round-trip bit-for-bit.
std::string state_to_json(const ProjectorState& state);
ProjectorState state_from_json(const std::string& text);

void save_state(const ProjectorState& state, const std::string& path);
ProjectorState load_state(const std::string& path);

/// Signal payloads: {"re": [...], "im": [...]} with "im" optional on input.
std::string signal_to_json(const Signal& sig);
Signal signal_from_json(const std::string& text, const SpacePtr& space);
Signal load_signal(const std::string& path, const SpacePtr& space);
void save_signal(const Signal& sig, const std::string& path);

/// User-supplied problem description for the custom pipeline: a space, the
/// signal to split, the model atoms and the null-space atoms.
struct CustomModel {
  SpacePtr space;
  Signal signal;
  std::vector<Signal> atoms;
  std::vector<Signal> wperp;
};
CustomModel load_custom_model(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace obproj

#endif  // OBPROJ_SERIALIZE_HPP
