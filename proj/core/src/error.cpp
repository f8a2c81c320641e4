#include "histeps/error.hpp"

namespace histeps {

void throw_contract(const std::string& what) { throw ContractError(what); }

}  // namespace histeps
