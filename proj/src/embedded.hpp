#pragma once

#include <cstddef>
#include <string_view>

namespace bcnobs::detail {

struct EmbeddedFile {
    std::string_view name;
    std::string_view text;
};

// Defined in the generated model_data.cpp.
extern const EmbeddedFile kEmbeddedFiles[];
extern const std::size_t kEmbeddedFileCount;

}  // namespace bcnobs::detail
