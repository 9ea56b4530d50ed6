// Must not compile: a view exposes its owner and nothing reachable beyond it.
#include "patsched/resource_agent.hpp"

using namespace patsched;

int main() {
    ResourceAgent agent(ResourceState{}, PolicyLabel::DOPSG, {"R0", "R1"});
    const auto view = agent.local_view(0);
    return static_cast<int>(view.neighbour(1).occupancy());
}
