#ifndef C2KA_EMBEDDED_HPP
#define C2KA_EMBEDDED_HPP

#include <span>
#include <string_view>

namespace c2ka::detail {

struct EmbeddedFile {
  std::string_view name;
  std::string_view text;
};

/// Contents of fixtures/ at build time, sorted by file name.
std::span<const EmbeddedFile> embedded_fixture_files();

}  // namespace c2ka::detail

#endif  // C2KA_EMBEDDED_HPP
