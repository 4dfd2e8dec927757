#pragma once

#include <map>
#include <string>
#include <vector>

namespace mli {

// A domain type is either a finite set of constants or an infinite free
// term algebra generated by a seed constant and the functions returning
// the type. For an infinite type `constants` holds exactly the seed.
struct DomainType {
  std::string name;
  bool infinite = false;
  std::vector<std::string> constants;

  const std::string& seed() const { return constants.front(); }
};

struct FunctionDecl {
  std::string name;
  std::vector<std::string> arg_types;
  std::string return_type;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::string> arg_types;
};

struct Signature {
  std::map<std::string, DomainType> types;
  std::map<std::string, std::string> constants;  // constant name -> type
  std::map<std::string, FunctionDecl> functions;
  std::map<std::string, PredicateDecl> predicates;

  bool is_infinite_type(const std::string& type) const {
    auto it = types.find(type);
    return it != types.end() && it->second.infinite;
  }

  // Functions whose return type is `type`, in name order.
  std::vector<const FunctionDecl*> generators_of(const std::string& type) const {
    std::vector<const FunctionDecl*> out;
    for (const auto& [name, fn] : functions) {
      if (fn.return_type == type) out.push_back(&fn);
    }
    return out;
  }
};

bool operator==(const DomainType& a, const DomainType& b);
bool operator==(const FunctionDecl& a, const FunctionDecl& b);
bool operator==(const PredicateDecl& a, const PredicateDecl& b);
bool operator==(const Signature& a, const Signature& b);

}  // namespace mli
