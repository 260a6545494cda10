package com.google.common.base;

public class ThrowablesTest {
    void testLazyStackTrace() {
        // TODO: Remove this guard once lazyStackTrace() works in Java 9.
        return;
    }
}
