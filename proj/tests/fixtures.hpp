#pragma once

#include "pstt/chip.hpp"
#include "pstt/surface.hpp"

namespace pstt::test {

inline const ChipSpec& chip0_from_file() {
    static const ChipSpec chip = load_chip_spec(PSTT_TEST_DATA "/chip0.json");
    return chip;
}

inline Judgement judgement(std::string_view ctx, std::string_view term, std::string_view type) {
    return Judgement{parse_context(ctx), parse_term(term), parse_type(type)};
}

}  // namespace pstt::test
