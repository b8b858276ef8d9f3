#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tycus/rdf.hpp"
#include "tycus/shacl.hpp"

#ifndef TYCUS_TEST_DATA_DIR
#define TYCUS_TEST_DATA_DIR "tests/data"
#endif

namespace tycus::test {

inline std::string data_path(const std::string& name) {
    return std::string(TYCUS_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline RdfGraph g1() { return parse_graph(read_file(data_path("g1.nt"))); }
inline RdfGraph g1_prime() { return parse_graph(read_file(data_path("g1_prime.nt"))); }
inline ShapeSet paper_shapes() { return parse_shapes(read_file(data_path("paper_shapes.shc"))); }

}  // namespace tycus::test
