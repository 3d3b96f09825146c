#include "datacat/resolve.hpp"

namespace datacat::deeplink {

using resources::TableResource;
using resources::TextResource;

ResolvedRegion resolve(const DeepLink& link, const resources::ResourceRegistry& registry) {
    ResolvedRegion region{registry.find(link.base_iri), {}};
    if (const auto* table = std::get_if<std::shared_ptr<const TableResource>>(&region.resource)) {
        const auto& t = **table;
        region.bounds = link.selector ? clamp_table(*link.selector, t.row_count(), t.col_count())
                                      : Bounds{1, t.row_count(), 1, t.col_count()};
    } else {
        const auto& t = *std::get<std::shared_ptr<const TextResource>>(region.resource);
        region.bounds = link.selector ? clamp_text(*link.selector, t.line_count()) : Bounds{1, t.line_count(), 1, 1};
    }
    return region;
}

}  // namespace datacat::deeplink
