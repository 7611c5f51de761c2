/* Evaluate a few subnets of the VQE space through the C API. */
#include <stdio.h>
#include <string.h>

#include "qas.h"

#define CHECK(call)                                                      \
    do {                                                                 \
        QasStatus st_ = (call);                                          \
        if (st_ != QAS_OK) {                                             \
            char msg_[256];                                              \
            qas_last_error_message(msg_, sizeof msg_, NULL);             \
            fprintf(stderr, "%s failed (%d): %s\n", #call, st_, msg_);   \
            return 1;                                                    \
        }                                                                \
    } while (0)

int main(void) {
    QasHamiltonian *h = qas_hamiltonian_h2();
    QasSpace *space = qas_space_vqe();
    QasStore *store = NULL;
    double exact = 0.0;
    uint64_t size = 0;
    char arch[128];

    CHECK(qas_hamiltonian_exact_energy(h, &exact));
    CHECK(qas_space_size(space, &size));
    CHECK(qas_store_new(space, 7, &store));
    printf("version %s\nexact %.6f\nsubnets %llu\n", qas_version(), exact, (unsigned long long)size);

    QasNoise noise = {0.05, 0.2, 1};
    for (uint64_t seed = 0; seed < 3; seed++) {
        double e = 0.0;
        CHECK(qas_space_sample(space, seed, arch, sizeof arch, NULL));
        CHECK(qas_store_evaluate(store, arch, h, &noise, &e));
        printf("%s %.6f\n", arch, e);
    }

    if (qas_arch_normalize(space, "not an architecture", arch, sizeof arch, NULL) == QAS_OK) {
        return 1;
    }
    qas_store_free(store);
    qas_space_free(space);
    qas_hamiltonian_free(h);
    return 0;
}
