// Must not compile: an agent holds peer ids only, not peer state.
#include "patsched/resource_agent.hpp"

using namespace patsched;

int main() {
    ResourceAgent agent(ResourceState{}, PolicyLabel::DOPSG, {"R0", "R1"});
    return static_cast<int>(agent.ring_.size());
}
