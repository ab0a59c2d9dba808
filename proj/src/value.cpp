#include "blockea/value.hpp"

#include "blockea/format.hpp"

namespace blockea {

ValueType Value::type() const {
  switch (data.index()) {
    case 0: return ValueType::Number;
    case 1: return ValueType::Boolean;
    case 2: return ValueType::Text;
    case 3: return ValueType::Individual;
    case 4: return ValueType::Population;
    default: return ValueType::ListOfNumber;
  }
}

std::string to_text(const NumberList& list) {
  std::string out = "[";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(list[i]);
  }
  return out + "]";
}

}  // namespace blockea
