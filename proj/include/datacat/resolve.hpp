#pragma once

#include "datacat/deeplink.hpp"
#include "datacat/resources.hpp"

namespace datacat::deeplink {

struct ResolvedRegion {
    resources::ResourceRef resource;
    Bounds bounds;

    bool is_table() const noexcept {
        return std::holds_alternative<std::shared_ptr<const resources::TableResource>>(resource);
    }
};

/// Looks up the link's resource and replaces open or overlong ends with the
/// actual extents. A link without a selector covers the whole resource.
/// Throws Error(UnknownResource), Error(SelectorKindMismatch), Error(OutOfBounds).
ResolvedRegion resolve(const DeepLink& link, const resources::ResourceRegistry& registry);

}  // namespace datacat::deeplink
