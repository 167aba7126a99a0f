#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "tdtsynth/automata.hpp"
#include "tdtsynth/transducers.hpp"

namespace tdt {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-oriented automaton format:
///   input f:2 a:0
///   output f:2 g:2 b:0      (absent for plain automata)
///   states q0 q qf
///   initial q0
///   q0 f|g -> q q
///   q1 _|g -> q2
///   q0 f -> q1 q2           (plain)
/// `#` starts a comment. Errors are ParseError with a line number.
TopDownAutomaton parse_automaton(std::string_view text);
std::string print_automaton(const TopDownAutomaton& a);

/// Same header, then rules such as `q0 f(x1,x2) -> f(q1 x1, q2 x2)` or
/// `q0 a -> b`. A rule without an input symbol (`q -> ...`) is an ε-rule.
Transducer parse_transducer(std::string_view text);
std::string print_transducer(const Transducer& t);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

TopDownAutomaton load_automaton(const std::string& path);
Transducer load_transducer(const std::string& path);

}  // namespace tdt
