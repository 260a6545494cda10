package com.google.devtools.j2objc.util;

public class OptionsTest {
    void testSourceVersion() {
        // TODO: change to 1.9 when Java 9 is supported.
        String version = "1.8";
    }
}
