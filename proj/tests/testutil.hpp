#pragma once

#include "tempohorn/model.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testutil {

inline std::string fixturePath(const std::string & name) {
    return std::string(TEMPOHORN_FIXTURE_DIR) + "/" + name;
}

inline std::string readFile(const std::string & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read fixture " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string fixture(const std::string & name) { return readFile(fixturePath(name)); }

inline tempohorn::model::BusinessProcessSpec loadPO() {
    return tempohorn::model::BusinessProcessSpec::parse(fixture("po.pl"));
}

} // namespace testutil
