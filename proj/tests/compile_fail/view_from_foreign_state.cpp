// Must not compile: decision code cannot mint a view of someone else's state.
#include "patsched/migration.hpp"

using namespace patsched;

int main() {
    ResourceState foreign;
    LocalView view(foreign, 0, 0);
    return static_cast<int>(evaluate_request(view, MigrationRequest{1}).index());
}
