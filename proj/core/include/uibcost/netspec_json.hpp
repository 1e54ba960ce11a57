// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "uibcost/network.hpp"

namespace uibcost::ir {

// NetworkSpec <-> JSON text. parse validates the result (kernels, strides,
// shape propagation) and throws ParseError / ValidationError. Round-trip
// parse(emit(net)) == net.
NetworkSpec parse_netspec(const std::string& text);
std::string emit_netspec(const NetworkSpec& net);

NetworkSpec load_netspec_file(const std::string& path);
void save_netspec_file(const NetworkSpec& net, const std::string& path);

}  // namespace uibcost::ir
