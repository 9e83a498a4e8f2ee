#pragma once

// The committed 7x7 catalogue, compiled in so simulations never search.
// Needs the build's generated include directory (target edom::edom).

#include <string>
#include <string_view>

#include "edom/catalogue.hpp"

namespace edom {

#include "edom/catalogue_data.inc"

inline const Catalogue7x7& embedded_catalogue() {
  static const Catalogue7x7 cat = parse_catalogue(std::string(kEmbeddedCatalogue));
  return cat;
}

}  // namespace edom
