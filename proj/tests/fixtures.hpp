#pragma once

#include <string>

#include "tep/instance.hpp"

namespace tep::testing {

inline TepInstance fixture(const std::string& name) {
    return load_instance(std::string(TEP_INSTANCE_DIR) + "/" + name + ".json");
}

} // namespace tep::testing
