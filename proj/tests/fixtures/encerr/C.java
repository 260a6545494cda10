package example;

public class C {
    private int g;

    @TrigItMethod
    boolean trigItFieldStillPrivate() {
        return TrigIt.getClass("C").getField("f").isPrivate();
    }
}
