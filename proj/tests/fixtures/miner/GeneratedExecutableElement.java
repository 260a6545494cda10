package com.google.devtools.j2objc.ast;

public class GeneratedExecutableElement {
    /** TODO: Make private when javac conversion is complete. */
    public GeneratedExecutableElement self() {
        return this;
    }
}
